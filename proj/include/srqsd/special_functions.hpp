#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "srqsd/quadrature.hpp"

namespace srqsd {

inline constexpr double euler_gamma = 0.57721566490153286;

namespace detail {

// Continued fraction for e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(...)))),
// reliable for x >= 1.
inline double e1_cf_scaled(double x) {
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 300; ++k) {
        const double a = -static_cast<double>(k) * static_cast<double>(k);
        b += 2.0;
        d = b + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h;
}

} // namespace detail

// Exponential integral E1(x) = int_x^inf e^-t / t dt, x > 0.  std::expint
// is only used in the series regime x < 1: for large arguments libstdc++
// degrades to the leading asymptotic term (relative error ~1/x).
inline double exp_integral_e1(double x) {
    if (!(x > 0.0))
        throw std::domain_error("exp_integral_e1: requires x > 0, got " +
                                std::to_string(x));
    if (x < 1.0) return -std::expint(-x);
    return std::exp(-x) * detail::e1_cf_scaled(x);
}

// e^x E1(x), stable for every x > 0 (the unscaled product overflows past
// x ~ 700).
inline double exp_e1_scaled(double x) {
    if (!(x > 0.0))
        throw std::domain_error("exp_e1_scaled: requires x > 0, got " +
                                std::to_string(x));
    if (x < 1.0) return std::exp(x) * (-std::expint(-x));
    return detail::e1_cf_scaled(x);
}

namespace detail {

// Continued fraction for Gamma(a, x), reliable for x >= 1.5 and x >= a + 1.
inline double upper_gamma_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 500; ++k) {
        const double ak = -static_cast<double>(k) * (static_cast<double>(k) - a);
        b += 2.0;
        d = b + ak * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + ak / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(a * std::log(x) - x) * h;
}

// Lower-gamma series gamma(a, x) = x^a e^-x sum_n x^n / (a (a+1) ... (a+n)),
// for a > 0 and small x.
inline double lower_gamma_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 400; ++n) {
        term *= x / (a + static_cast<double>(n));
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return std::exp(a * std::log(x) - x) * sum;
}

// Gamma(a, x) for |a| <= 0.25 and small x, organised so the a -> 0 limit
// (E1) suffers no cancellation:
//   Gamma(a,x) = [ (Gamma(1+a)-1) - (x^a - 1) ] / a - x^a sum_{n>=1} (-x)^n/(n! (a+n)).
inline double upper_gamma_small_a(double a, double x) {
    const double lx = std::log(x);
    double head;
    if (a == 0.0)
        head = -euler_gamma - lx;
    else
        head = (std::expm1(std::lgamma(1.0 + a)) - std::expm1(a * lx)) / a;
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n < 200; ++n) {
        term *= -x / static_cast<double>(n);
        const double add = term / (a + static_cast<double>(n));
        sum += add;
        if (std::fabs(add) < (std::fabs(sum) + 1e-30) * 1e-17) break;
    }
    return head - std::exp(a * lx) * sum;
}

} // namespace detail

// Upper incomplete gamma Gamma(a, x) = int_x^inf t^{a-1} e^-t dt for x > 0
// and |a| <= 60, including negative and zero a (Gamma(0, x) = E1(x)).
inline double upper_incomplete_gamma(double a, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("upper_incomplete_gamma: requires x > 0, got " +
                                std::to_string(x));
    if (!(std::fabs(a) <= 60.0))
        throw std::domain_error("upper_incomplete_gamma: |a| <= 60 supported, got " +
                                std::to_string(a));
    if (x >= 1.5 && x >= a + 1.0) return detail::upper_gamma_cf(a, x);
    if (a > 0.25) return std::tgamma(a) - detail::lower_gamma_series(a, x);
    // Shift a into [-0.25, 0.75) and recurse downward with
    // Gamma(c-1, x) = (Gamma(c, x) - x^{c-1} e^-x) / (c-1); every divisor
    // stays below -0.25 so no step is ill-conditioned.
    const int k = std::max(0, static_cast<int>(std::ceil(-0.25 - a)));
    const double c = a + static_cast<double>(k);
    double g = (std::fabs(c) <= 0.25)
                   ? detail::upper_gamma_small_a(c, x)
                   : std::tgamma(c) - detail::lower_gamma_series(c, x);
    for (int j = 0; j < k; ++j) {
        const double b = c - static_cast<double>(j + 1);
        g = (g - std::exp(b * std::log(x) - x)) / b;
    }
    return g;
}

// e^x Gamma(a, x); stays finite where e^x alone overflows.  For large x the
// unscaled value is recovered from the asymptotic tail sum
//   e^x Gamma(a, x) = x^{a-1} [ 1 + (a-1)/x + (a-1)(a-2)/x^2 + ... ],
// truncated where the (divergent) terms stop shrinking.
inline double upper_incomplete_gamma_scaled(double a, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("upper_incomplete_gamma_scaled: requires x > 0, got " +
                                std::to_string(x));
    if (!(std::fabs(a) <= 60.0))
        throw std::domain_error("upper_incomplete_gamma_scaled: |a| <= 60 supported, got " +
                                std::to_string(a));
    if (x < 400.0) return std::exp(x) * upper_incomplete_gamma(a, x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 30; ++k) {
        term *= (a - static_cast<double>(k)) / x;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return std::exp((a - 1.0) * std::log(x)) * sum;
}

namespace detail {

inline double cosh_m1(double t) {
    const double s = std::sinh(0.5 * t);
    return 2.0 * s * s;
}

// Order factor of the K integral in the order-squared parameterisation
// s = nu^2: cosh(sqrt(s) t) for real order, cos(sqrt(-s) t) for imaginary.
inline double order_factor(double s, double t) {
    return (s < 0.0) ? std::cos(std::sqrt(-s) * t) : std::cosh(std::sqrt(s) * t);
}

inline void check_bessel_args(const char* who, double s, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(who) + ": requires x > 0, got " +
                                std::to_string(x));
    if (!(std::fabs(s) <= 400.0))
        throw std::domain_error(std::string(who) +
                                ": order-squared s outside supported |s| <= 400, got " +
                                std::to_string(s));
}

// Truncation point where e^{-x (cosh t - 1)} falls below the double
// underflow threshold; the discarded tail is identically zero in double.
inline double bessel_truncation(double x) {
    return std::min(60.0, std::acosh(1.0 + 745.0 / x));
}

} // namespace detail

// e^x K_nu(x) in the order-squared parameterisation s = nu^2 (s < 0 means
// purely imaginary order i sqrt(-s)):
//   e^x K = int_0^T e^{-x (cosh t - 1)} c(s, t) dt.
// The scaled form keeps ratios K(x1)/K(x2) finite where the plain values
// underflow.
inline double bessel_k_scaled(double s, double x, const QuadratureSpec& spec = {}) {
    detail::check_bessel_args("bessel_k_scaled", s, x);
    const double T = detail::bessel_truncation(x);
    auto f = [s, x](double t) {
        const double e = x * detail::cosh_m1(t);
        if (e > 745.0) return 0.0;
        return std::exp(-e) * detail::order_factor(s, t);
    };
    return integrate_adaptive(f, 0.0, T, spec).value;
}

// K_nu(x), s = nu^2 as above.
inline double bessel_k(double s, double x, const QuadratureSpec& spec = {}) {
    return std::exp(-x) * bessel_k_scaled(s, x, spec);
}

// e^x dK_nu/dx = -int_0^T cosh t e^{-x (cosh t - 1)} c(s, t) dt.
inline double bessel_k_dx_scaled(double s, double x, const QuadratureSpec& spec = {}) {
    detail::check_bessel_args("bessel_k_dx_scaled", s, x);
    const double T = detail::bessel_truncation(x);
    auto f = [s, x](double t) {
        const double e = x * detail::cosh_m1(t);
        if (e > 745.0) return 0.0;
        return -std::cosh(t) * std::exp(-e) * detail::order_factor(s, t);
    };
    return integrate_adaptive(f, 0.0, T, spec).value;
}

inline double bessel_k_dx(double s, double x, const QuadratureSpec& spec = {}) {
    return std::exp(-x) * bessel_k_dx_scaled(s, x, spec);
}

// Whittaker W_{0, b}(z) = sqrt(z / pi) K_b(z / 2), s = b^2.
inline double whittaker_w0(double s, double z, const QuadratureSpec& spec = {}) {
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::domain_error("whittaker_w0: requires z > 0, got " +
                                std::to_string(z));
    return std::sqrt(z / M_PI) * bessel_k(s, 0.5 * z, spec);
}

// Whittaker W_{1, b}(z) via the derivative of K at z / 2:
//   W_{1,b}(z) = (z/2) sqrt(z/pi) [ (1 - 1/z) K_b(z/2) - K_b'(z/2) ],
// evaluated through the scaled kernels so small z / 2 cannot overflow.
inline double whittaker_w1(double s, double z, const QuadratureSpec& spec = {}) {
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::domain_error("whittaker_w1: requires z > 0, got " +
                                std::to_string(z));
    const double w = 0.5 * z;
    const double k = bessel_k_scaled(s, w, spec);
    const double kd = bessel_k_dx_scaled(s, w, spec);
    return 0.5 * z * std::sqrt(z / M_PI) * std::exp(-w) *
           ((1.0 - 1.0 / z) * k - kd);
}

} // namespace srqsd
