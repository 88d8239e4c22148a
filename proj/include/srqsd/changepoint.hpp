#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "srqsd/distribution.hpp"
#include "srqsd/eigenvalue.hpp"
#include "srqsd/quadrature.hpp"
#include "srqsd/special_functions.hpp"

namespace srqsd {

// Worst-case average detection delay of the randomized detection rule
// driven by the quasi-stationary law, with the three analytic majorants.
struct SaddResult {
    double A = 0.0;
    double sadd_exact = 0.0;
    double bound_gamma = 0.0;
    double bound_simple = 0.0;
    double bound_l5 = 0.0;
    double quadrature_err = 0.0;
};

namespace detail {

inline void check_real_order(const char* who, const EigenContext& ctx) {
    if (ctx.regime == OrderRegime::imaginary_order)
        throw std::domain_error(std::string(who) +
                                ": requires the threshold at or above the "
                                "order-zero threshold (real order)");
}

// int_0^A e^{2/t} E1(2/t) q_A(t) dt with its error estimate.
inline QuadratureResult sadd_pdf_integral(const EigenContext& ctx,
                                          const QuadratureSpec& spec) {
    auto f = [&](double t) {
        return exp_e1_scaled(2.0 / t) *
               qsd_pdf(ctx, t, Representation::derivative_form, spec);
    };
    return integrate_adaptive(f, 0.0, ctx.A, spec);
}

} // namespace detail

// SADD = 2 { e^{2/A} E1(2/A) - int_0^A e^{2/t} E1(2/t) q_A(t) dt }, A > 0.
inline double sadd_exact(const EigenContext& ctx, const QuadratureSpec& spec = {}) {
    return 2.0 * (exp_e1_scaled(2.0 / ctx.A) -
                  detail::sadd_pdf_integral(ctx, spec).value);
}

// Equivalent cdf route:
// SADD = 2 { e^{2/A} E1(2/A) - 1 + 2 lambda int_0^A e^{2/t} E1(2/t) Q_A(t) dt/t }.
inline double sadd_exact_cdf_form(const EigenContext& ctx,
                                  const QuadratureSpec& spec = {}) {
    auto f = [&](double t) {
        return exp_e1_scaled(2.0 / t) * qsd_cdf(ctx, t, spec) / t;
    };
    const double integral = integrate_adaptive(f, 0.0, ctx.A, spec).value;
    return 2.0 * (exp_e1_scaled(2.0 / ctx.A) - 1.0 + 2.0 * ctx.lambda * integral);
}

// 2 { lambda A (A/2)^{2/A} e^{2/A} Gamma(2/A, 2/A) - (lambda A - 1) e^{2/A} E1(2/A) - 1 }.
inline double sadd_upper_gamma(const EigenContext& ctx) {
    detail::check_real_order("sadd_upper_gamma", ctx);
    const double a = 2.0 / ctx.A;
    const double la = ctx.lambda * ctx.A;
    const double g = std::exp(a - a * std::log(a)) * upper_incomplete_gamma(a, a);
    return 2.0 * (la * g - (la - 1.0) * exp_e1_scaled(a) - 1.0);
}

// 2 (lambda A - 1) { A/2 - e^{2/A} E1(2/A) }; elementary functions only.
inline double sadd_upper_simple(const EigenContext& ctx) {
    detail::check_real_order("sadd_upper_simple", ctx);
    const double la = ctx.lambda * ctx.A;
    return 2.0 * (la - 1.0) * (0.5 * ctx.A - exp_e1_scaled(2.0 / ctx.A));
}

// 2 { e^{2/A} E1(2/A) - 1 + (2 lambda / (lambda A - 1)) e^{2/A} E1(2/A) }.
inline double sadd_upper_l5(const EigenContext& ctx) {
    detail::check_real_order("sadd_upper_l5", ctx);
    const double e = exp_e1_scaled(2.0 / ctx.A);
    return 2.0 * (e - 1.0 + 2.0 * ctx.lambda / (ctx.lambda * ctx.A - 1.0) * e);
}

inline SaddResult sadd_report(const EigenContext& ctx, const QuadratureSpec& spec = {}) {
    SaddResult r;
    r.A = ctx.A;
    const auto integral = detail::sadd_pdf_integral(ctx, spec);
    r.sadd_exact = 2.0 * (exp_e1_scaled(2.0 / ctx.A) - integral.value);
    r.quadrature_err = 2.0 * integral.error_estimate;
    r.bound_gamma = sadd_upper_gamma(ctx);
    r.bound_simple = sadd_upper_simple(ctx);
    r.bound_l5 = sadd_upper_l5(ctx);
    return r;
}

} // namespace srqsd
