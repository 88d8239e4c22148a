#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "srqsd/distribution.hpp"
#include "srqsd/eigenvalue.hpp"
#include "srqsd/error.hpp"
#include "srqsd/quadrature.hpp"
#include "srqsd/root_finding.hpp"
#include "srqsd/special_functions.hpp"

namespace srqsd {

// The named analytic envelopes: ten for the pdf q_A (lower l1..l6, upper
// u1,u2,u3,u6) and five for the cdf Q_A (lower L1,L6, upper U1,U5,U6).
enum class BoundKind {
    l1_pdf, u1_pdf, l2_pdf, u2_pdf, l3_pdf, u3_pdf, l4_pdf, l5_pdf, l6_pdf, u6_pdf,
    l1_cdf, l6_cdf, u1_cdf, u5_cdf, u6_cdf
};

enum class BoundSide { lower, upper };
enum class BoundTarget { pdf, cdf };

// Validity in the threshold: everywhere, at/above the order-zero threshold
// (real order), or strictly above it.
enum class ThresholdDomain { any_threshold, at_or_above_order_zero, above_order_zero };

struct BoundInfo {
    BoundSide side;
    BoundTarget target;
    ThresholdDomain domain;
    const char* name;
};

inline const BoundInfo& bound_info(BoundKind kind) {
    static const std::array<BoundInfo, 15> table = {{
        {BoundSide::lower, BoundTarget::pdf, ThresholdDomain::any_threshold, "l1"},
        {BoundSide::upper, BoundTarget::pdf, ThresholdDomain::any_threshold, "u1"},
        {BoundSide::lower, BoundTarget::pdf, ThresholdDomain::any_threshold, "l2"},
        {BoundSide::upper, BoundTarget::pdf, ThresholdDomain::any_threshold, "u2"},
        {BoundSide::lower, BoundTarget::pdf, ThresholdDomain::at_or_above_order_zero, "l3"},
        {BoundSide::upper, BoundTarget::pdf, ThresholdDomain::at_or_above_order_zero, "u3"},
        {BoundSide::lower, BoundTarget::pdf, ThresholdDomain::above_order_zero, "l4"},
        {BoundSide::lower, BoundTarget::pdf, ThresholdDomain::at_or_above_order_zero, "l5"},
        {BoundSide::lower, BoundTarget::pdf, ThresholdDomain::any_threshold, "l6"},
        {BoundSide::upper, BoundTarget::pdf, ThresholdDomain::any_threshold, "u6"},
        {BoundSide::lower, BoundTarget::cdf, ThresholdDomain::any_threshold, "L1"},
        {BoundSide::lower, BoundTarget::cdf, ThresholdDomain::any_threshold, "L6"},
        {BoundSide::upper, BoundTarget::cdf, ThresholdDomain::any_threshold, "U1"},
        {BoundSide::upper, BoundTarget::cdf, ThresholdDomain::at_or_above_order_zero, "U5"},
        {BoundSide::upper, BoundTarget::cdf, ThresholdDomain::at_or_above_order_zero, "U6"},
    }};
    return table[static_cast<std::size_t>(kind)];
}

inline constexpr std::array<BoundKind, 15> all_bound_kinds = {
    BoundKind::l1_pdf, BoundKind::u1_pdf, BoundKind::l2_pdf, BoundKind::u2_pdf,
    BoundKind::l3_pdf, BoundKind::u3_pdf, BoundKind::l4_pdf, BoundKind::l5_pdf,
    BoundKind::l6_pdf, BoundKind::u6_pdf, BoundKind::l1_cdf, BoundKind::l6_cdf,
    BoundKind::u1_cdf, BoundKind::u5_cdf, BoundKind::u6_cdf};

inline BoundKind bound_kind_from_name(std::string_view name) {
    for (BoundKind k : all_bound_kinds)
        if (name == bound_info(k).name) return k;
    throw std::domain_error("unknown bound name: " + std::string(name));
}

namespace detail {

inline void check_bound_domain(const BoundInfo& info, const EigenContext& ctx) {
    switch (info.domain) {
    case ThresholdDomain::any_threshold:
        return;
    case ThresholdDomain::at_or_above_order_zero:
        if (ctx.regime == OrderRegime::imaginary_order)
            throw std::domain_error(std::string(info.name) +
                                    ": requires the threshold at or above the "
                                    "order-zero threshold (real order)");
        return;
    case ThresholdDomain::above_order_zero:
        if (!(ctx.s > 0.0))
            throw std::domain_error(std::string(info.name) +
                                    ": requires the threshold strictly above "
                                    "the order-zero threshold");
        return;
    }
}

inline void check_bound_point(const char* who, const EigenContext& ctx, double x) {
    if (!std::isfinite(x) || x < 0.0 || x > ctx.A)
        throw std::domain_error(std::string(who) + ": requires x in [0, A], got x = " +
                                std::to_string(x) + " with A = " + std::to_string(ctx.A));
}

// Exponent added to log(e^{2/A} H(x)) by the U6 envelope, log-kernel route:
//   (2 lambda / Gamma(2 - a)) int_0^inf log((1 + A y/2)/(1 + x y/2)) e^-y y^-a dy
// with a = 2/A.  The 1/Gamma(2 - a) factor comes with the representation
// Gamma(a-1, t) = t^{a-1} e^-t / Gamma(2-a) * int_0^inf y^{1-a} e^-y / (y + t) dy.
inline double u6_exponent_log_kernel(const EigenContext& ctx, double x,
                                     const QuadratureSpec& spec) {
    const double a = 2.0 / ctx.A;
    const double A = ctx.A;
    auto f = [A, x, a](double y) {
        const double ratio = std::log1p(0.5 * A * y) - std::log1p(0.5 * x * y);
        return ratio * std::exp(-y) * std::pow(y, -a);
    };
    const double integral =
        integrate_adaptive(f, 0.0, std::numeric_limits<double>::infinity(), spec).value;
    return 2.0 * ctx.lambda * integral / std::tgamma(2.0 - a);
}

// Same exponent through the (1 + y)-kernel route:
//   2 lambda int_0^inf [E1(2y/A) - E1(2y/x)] (1 + y)^{a-2} dy.
inline double u6_exponent_e1_kernel(const EigenContext& ctx, double x,
                                    const QuadratureSpec& spec) {
    const double a = 2.0 / ctx.A;
    const double A = ctx.A;
    auto f = [A, x, a](double y) {
        const double diff = exp_integral_e1(2.0 * y / A) - exp_integral_e1(2.0 * y / x);
        return diff * std::exp((a - 2.0) * std::log1p(y));
    };
    const double integral =
        integrate_adaptive(f, 0.0, std::numeric_limits<double>::infinity(), spec).value;
    return 2.0 * ctx.lambda * integral;
}

} // namespace detail

// Evaluates a pdf bound against a precomputed Q_A(x); all ten pdf kinds scale
// a shared cdf value, so grid sweeps compute Q_A once per abscissa.
inline double pdf_bound(BoundKind kind, const EigenContext& ctx, double x,
                        double cdf_at_x, const QuadratureSpec& = {}) {
    const BoundInfo& info = bound_info(kind);
    if (info.target != BoundTarget::pdf)
        throw std::domain_error(std::string("pdf_bound: ") + info.name + " targets the cdf");
    detail::check_bound_domain(info, ctx);
    detail::check_bound_point("pdf_bound", ctx, x);
    const double A = ctx.A;
    const double lam = ctx.lambda;
    const double Q = cdf_at_x;
    if (x == 0.0) {
        if (kind == BoundKind::l2_pdf) return -std::numeric_limits<double>::infinity();
        if (kind == BoundKind::u2_pdf) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    const double pref = 2.0 / (x * x);
    switch (kind) {
    case BoundKind::l1_pdf:
        return pref * Q * (1.0 - lam * x);
    case BoundKind::u1_pdf:
        return pref * Q;
    case BoundKind::l2_pdf:
        return pref * (Q * (1.0 + lam * A - lam * x) - 1.0);
    case BoundKind::u2_pdf:
        return pref * (Q + lam * A - 1.0 - lam * x);
    case BoundKind::l3_pdf:
        return pref * Q * 0.25 * (3.0 + ctx.xi()) * (A - x) / (A + 1.0);
    case BoundKind::u3_pdf:
        return pref * Q * 0.5 * (1.0 - ctx.xi()) * (A - x);
    case BoundKind::l4_pdf: {
        const double xi = ctx.xi();
        return 0.5 * pref * Q * (1.0 + xi - 0.5 * x * (1.0 - xi));
    }
    case BoundKind::l5_pdf:
        return pref * Q * (1.0 - x / A);
    case BoundKind::u6_pdf:
        if (Q == 0.0) return 0.0;
        return pref * Q * (1.0 - lam * (x - 2.0 * exp_e1_scaled(2.0 / x)));
    case BoundKind::l6_pdf: {
        if (Q == 0.0) return 0.0;
        const double g = upper_incomplete_gamma_scaled(-1.0 + 2.0 / A, 2.0 / x);
        return pref * Q * (1.0 - 2.0 * lam * std::exp((2.0 / A) * std::log(0.5 * x)) * g);
    }
    default:
        throw std::domain_error("pdf_bound: unhandled kind");
    }
}

inline double pdf_bound(BoundKind kind, const EigenContext& ctx, double x,
                        const QuadratureSpec& spec = {}) {
    return pdf_bound(kind, ctx, x, qsd_cdf(ctx, x, spec), spec);
}

// Evaluates a cdf bound; every kind is an explicit envelope of
// e^{2/A} H(x), assembled in log space so deep-left tails underflow cleanly.
inline double cdf_bound(BoundKind kind, const EigenContext& ctx, double x,
                        const QuadratureSpec& spec = {}) {
    const BoundInfo& info = bound_info(kind);
    if (info.target != BoundTarget::cdf)
        throw std::domain_error(std::string("cdf_bound: ") + info.name + " targets the pdf");
    detail::check_bound_domain(info, ctx);
    detail::check_bound_point("cdf_bound", ctx, x);
    if (x == 0.0) return 0.0;
    const double base = 2.0 / ctx.A - 2.0 / x;
    switch (kind) {
    case BoundKind::l1_cdf:
        return std::exp(base);
    case BoundKind::u1_cdf:
        return std::exp(base + 2.0 * ctx.lambda * std::log(ctx.A / x));
    case BoundKind::u5_cdf:
        return std::exp(base + (2.0 / ctx.A) * std::log(ctx.A / x));
    case BoundKind::l6_cdf:
        return std::exp(base + 2.0 * ctx.lambda *
                                   (exp_e1_scaled(2.0 / ctx.A) - exp_e1_scaled(2.0 / x)));
    case BoundKind::u6_cdf:
        return std::exp(base + detail::u6_exponent_log_kernel(ctx, x, spec));
    default:
        throw std::domain_error("cdf_bound: unhandled kind");
    }
}

// Both integral routes to U6 as {log-kernel value, (1+y)-kernel value};
// the two must agree to quadrature accuracy.
inline std::pair<double, double> cdf_bound_u6_forms(const EigenContext& ctx, double x,
                                                    const QuadratureSpec& spec = {}) {
    const BoundInfo& info = bound_info(BoundKind::u6_cdf);
    detail::check_bound_domain(info, ctx);
    detail::check_bound_point("cdf_bound_u6_forms", ctx, x);
    if (x == 0.0) return {0.0, 0.0};
    const double base = 2.0 / ctx.A - 2.0 / x;
    return {std::exp(base + detail::u6_exponent_log_kernel(ctx, x, spec)),
            std::exp(base + detail::u6_exponent_e1_kernel(ctx, x, spec))};
}

namespace detail {

inline double cached_order_zero_threshold() {
    static const double thr = order_zero_threshold();
    return thr;
}

} // namespace detail

// Elementary majorant of the gap root: 2 log A + 1/log A.
inline double gap_xstar_upper(double A) {
    const double lg = std::log(A);
    return 2.0 * lg + 1.0 / lg;
}

// Unique root x* in (0, A) of e^{2/A} (A/x)^{2/A} (1 - x/A) = 1, located on
// the log form (2/A)(1 + log(A/x)) + log1p(-x/A).
inline double gap_xstar(double A, const RootSpec& root = {}) {
    if (!(A >= detail::cached_order_zero_threshold()))
        throw std::domain_error(
            "gap_xstar: requires the threshold at or above the order-zero threshold, got " +
            std::to_string(A));
    auto f = [A](double x) {
        return (2.0 / A) * (1.0 + std::log(A / x)) + std::log1p(-x / A);
    };
    return find_root_bracketed(f, 1e-8 * A, A * (1.0 - 1e-12), root).root;
}

// sup over x of Q_A - H through the x*-free chain:
//   sup(Q_A - H) <= x*/(A - x*) <= c/(A - c) with c = 2 log A + 1/log A.
inline double gap_sup_bound(double A) {
    if (!(A >= detail::cached_order_zero_threshold()))
        throw std::domain_error(
            "gap_sup_bound: requires the threshold at or above the order-zero threshold, got " +
            std::to_string(A));
    const double c = gap_xstar_upper(A);
    return c / (A - c);
}

} // namespace srqsd
