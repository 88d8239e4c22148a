#pragma once

#include <stdexcept>
#include <string>

namespace srqsd {

// Quadrature stopped before reaching the requested tolerance.  Carries the
// best available estimate and its error bound so callers can decide whether
// the partial result is still usable.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& msg, double estimate, double error_estimate)
        : std::runtime_error(msg), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

// The supplied root bracket does not straddle a sign change.
class bracket_error : public std::runtime_error {
public:
    bracket_error(const std::string& msg, double f_lo, double f_hi)
        : std::runtime_error(msg), f_lo_(f_lo), f_hi_(f_hi) {}

    double f_lo() const noexcept { return f_lo_; }
    double f_hi() const noexcept { return f_hi_; }

private:
    double f_lo_;
    double f_hi_;
};

// Root iteration hit its iteration cap.  Carries the last bracket reached.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), lo_(lo), hi_(hi) {}

    double bracket_lo() const noexcept { return lo_; }
    double bracket_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

// Operation is only defined in the real-order regime (threshold at or above
// the order-zero point) and was called outside it.
class regime_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A simulation produced no usable sample (for example, every path was
// absorbed before the time horizon).
class degeneracy_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace srqsd
