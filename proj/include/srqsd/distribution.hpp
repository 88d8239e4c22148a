#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "srqsd/eigenvalue.hpp"
#include "srqsd/error.hpp"
#include "srqsd/quadrature.hpp"
#include "srqsd/special_functions.hpp"

namespace srqsd {

// Stationary law of the diffusion: H(x) = e^{-2/x} for x > 0, else 0.
inline double stationary_cdf(double x) {
    if (!(x > 0.0)) return 0.0;
    return std::exp(-2.0 / x);
}

// h(x) = (2/x^2) e^{-2/x} for x > 0, else 0.
inline double stationary_pdf(double x) {
    if (!(x > 0.0)) return 0.0;
    return 2.0 / (x * x) * std::exp(-2.0 / x);
}

// The three equivalent Bessel-K expressions for the quasi-stationary pdf.
// The k_minus / k_plus forms shift the order by -1 / +1 and so need a real
// order (threshold at or above the order-zero threshold).
enum class Representation { derivative_form, k_minus_form, k_plus_form };

namespace detail {

// log of the positive envelope sqrt(A/x) e^{2/A} e^{-2/x} multiplying the
// bounded scaled-kernel ratio in Q_A.  Below the denormal range the value
// is a certified zero and the kernels need not be evaluated.
inline double log_qsd_envelope(double A, double x) {
    return 0.5 * std::log(A / x) + 2.0 / A - 2.0 / x;
}

// exp(-745) is already past the smallest denormal; the pdf cutoff leaves
// slack for the 1/x^2 factor (at most e^{15} where the envelope is small).
constexpr double kCdfUnderflowLog = -745.0;
constexpr double kPdfUnderflowLog = -760.0;

inline void check_pdf_point(const char* who, const EigenContext& ctx, double x) {
    if (!std::isfinite(x) || !(x > 0.0) || !(x <= ctx.A))
        throw std::domain_error(std::string(who) + ": requires x in (0, A], got x = " +
                                std::to_string(x) + " with A = " + std::to_string(ctx.A));
}

} // namespace detail

// Q_A(x) = sqrt(A/x) e^{1/A - 1/x} K_b(1/x) / K_b(1/A), b^2 = s, extended by
// 0 below the support and 1 above it.
inline double qsd_cdf(const EigenContext& ctx, double x, const QuadratureSpec& spec = {}) {
    if (std::isnan(x))
        throw std::domain_error("qsd_cdf: x is NaN");
    if (x <= 0.0) return 0.0;
    if (x >= ctx.A) return 1.0;
    const double env = detail::log_qsd_envelope(ctx.A, x);
    if (env < detail::kCdfUnderflowLog) return 0.0;
    const double ratio = bessel_k_scaled(ctx.s, 1.0 / x, spec) /
                         bessel_k_scaled(ctx.s, 1.0 / ctx.A, spec);
    const double q = std::exp(env) * ratio;
    return q < 1.0 ? q : 1.0;
}

// q_A(x) through one of the three equivalent Bessel-K expressions:
//   derivative: (Q/x^2) [ (1 - x/2) - K_b'(1/x)/K_b(1/x) ]
//   k_minus:    (Q/x^2) [ 1 - (x/2)(1 - xi) + K_{b-1}(1/x)/K_b(1/x) ]
//   k_plus:     (Q/x^2) [ 1 - (x/2)(1 + xi) + K_{b+1}(1/x)/K_b(1/x) ]
// with b = xi/2.  All kernel ratios are evaluated in scaled form.
inline double qsd_pdf(const EigenContext& ctx, double x,
                      Representation rep = Representation::derivative_form,
                      const QuadratureSpec& spec = {}) {
    detail::check_pdf_point("qsd_pdf", ctx, x);
    if (rep != Representation::derivative_form &&
        ctx.regime == OrderRegime::imaginary_order)
        throw regime_error(
            "qsd_pdf: the order-shifted forms need a real order; only the "
            "derivative form is available below the order-zero threshold");
    const double env = detail::log_qsd_envelope(ctx.A, x);
    if (env < detail::kPdfUnderflowLog) return 0.0;

    const double u = 1.0 / x;
    const double kb = bessel_k_scaled(ctx.s, u, spec);
    const double kb_at_a = bessel_k_scaled(ctx.s, 1.0 / ctx.A, spec);
    double bracket = 0.0;
    switch (rep) {
    case Representation::derivative_form: {
        const double kd = bessel_k_dx_scaled(ctx.s, u, spec);
        bracket = (1.0 - 0.5 * x) - kd / kb;
        break;
    }
    case Representation::k_minus_form: {
        const double xi = ctx.xi();
        const double b = 0.5 * xi;
        const double km = bessel_k_scaled((b - 1.0) * (b - 1.0), u, spec);
        bracket = 1.0 - 0.5 * x * (1.0 - xi) + km / kb;
        break;
    }
    case Representation::k_plus_form: {
        const double xi = ctx.xi();
        const double b = 0.5 * xi;
        const double kp = bessel_k_scaled((b + 1.0) * (b + 1.0), u, spec);
        bracket = 1.0 - 0.5 * x * (1.0 + xi) + kp / kb;
        break;
    }
    }
    const double q = std::exp(env) / (x * x) * (kb / kb_at_a) * bracket;
    return q > 0.0 ? q : 0.0;
}

// Forward-equation representation q_A(x) = (2/x^2) { Q_A(x) - lambda
// int_0^x Q_A }; an independent consistency route around the kernel
// derivative.
inline double qsd_pdf_forward_form(const EigenContext& ctx, double x,
                                   const QuadratureSpec& spec = {}) {
    detail::check_pdf_point("qsd_pdf_forward_form", ctx, x);
    auto cdf = [&](double t) { return qsd_cdf(ctx, t, spec); };
    const double tail = integrate_adaptive(cdf, 0.0, x, spec).value;
    const double q = 2.0 / (x * x) * (qsd_cdf(ctx, x, spec) - ctx.lambda * tail);
    return q > 0.0 ? q : 0.0;
}

// int_0^A x^2 q_A dx = (lambda^2 A^2 - 2 lambda A + 2) / (lambda + lambda^2).
inline double qsd_second_moment(const EigenContext& ctx) {
    const double la = ctx.lambda * ctx.A;
    return (la * la - 2.0 * la + 2.0) / (ctx.lambda + ctx.lambda * ctx.lambda);
}

// int_0^A (1 - Q_A) dx = A - 1/lambda.
inline double qsd_mean(const EigenContext& ctx) {
    return ctx.A - 1.0 / ctx.lambda;
}

// Evaluates both sides of int_0^A Q_A(t) dt = 1/lambda and returns
// {quadrature value, 1/lambda}.
inline std::pair<double, double> identity_int_cdf(const EigenContext& ctx,
                                                  const QuadratureSpec& spec = {}) {
    auto cdf = [&](double t) { return qsd_cdf(ctx, t, spec); };
    const double lhs = integrate_adaptive(cdf, 0.0, ctx.A, spec).value;
    return {lhs, 1.0 / ctx.lambda};
}

// Abscissae with evaluation results and the lambda they were produced under.
struct EvalGrid {
    double A = 0.0;
    std::vector<double> xs;
    std::vector<double> values;
    double lambda_used = 0.0;
};

enum class GridKind { linear, logarithmic };

inline std::vector<double> make_grid(double lo, double hi, std::size_t n, GridKind kind) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::domain_error("make_grid: requires 0 < lo < hi and n >= 2");
    std::vector<double> xs(n);
    if (kind == GridKind::linear) {
        const double step = (hi - lo) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            xs[i] = lo + step * static_cast<double>(i);
    } else {
        const double llo = std::log(lo);
        const double step = (std::log(hi) - llo) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            xs[i] = std::exp(llo + step * static_cast<double>(i));
    }
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

namespace detail {

inline void check_grid(const EigenContext& ctx, const std::vector<double>& xs) {
    if (xs.empty() || !(xs.front() > 0.0) || !(xs.back() <= ctx.A))
        throw std::domain_error("eval grid: abscissae must lie in (0, A]");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::domain_error("eval grid: abscissae must be strictly increasing");
}

} // namespace detail

inline EvalGrid eval_cdf_grid(const EigenContext& ctx, const std::vector<double>& xs,
                              const QuadratureSpec& spec = {}) {
    detail::check_grid(ctx, xs);
    EvalGrid g{ctx.A, xs, {}, ctx.lambda};
    g.values.reserve(xs.size());
    for (double x : xs) g.values.push_back(qsd_cdf(ctx, x, spec));
    return g;
}

inline EvalGrid eval_pdf_grid(const EigenContext& ctx, const std::vector<double>& xs,
                              Representation rep = Representation::derivative_form,
                              const QuadratureSpec& spec = {}) {
    detail::check_grid(ctx, xs);
    EvalGrid g{ctx.A, xs, {}, ctx.lambda};
    g.values.reserve(xs.size());
    for (double x : xs) g.values.push_back(qsd_pdf(ctx, x, rep, spec));
    return g;
}

} // namespace srqsd
