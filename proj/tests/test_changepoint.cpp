#include "srqsd/changepoint.hpp"

#include <cmath>
#include <map>

#include <gtest/gtest.h>

namespace {

using srqsd::EigenContext;

const EigenContext& ctx_for(double A) {
    static std::map<double, EigenContext> cache;
    auto it = cache.find(A);
    if (it == cache.end()) it = cache.emplace(A, srqsd::solve_lambda(A)).first;
    return it->second;
}

double threshold() {
    static const double thr = srqsd::order_zero_threshold();
    return thr;
}

TEST(SaddExact, DualFormsAgree) {
    for (double A : {threshold(), 15.0, 20.0, 30.0, 50.0}) {
        const auto& ctx = ctx_for(A);
        const double pdf_route = srqsd::sadd_exact(ctx);
        const double cdf_route = srqsd::sadd_exact_cdf_form(ctx);
        EXPECT_NEAR(cdf_route, pdf_route, 1e-5 * pdf_route) << "A=" << A;
    }
}

TEST(SaddExact, PositiveAndBelowKernelCap) {
    for (double A : {5.0, 15.0, 30.0}) {
        const auto& ctx = ctx_for(A);
        const double v = srqsd::sadd_exact(ctx);
        EXPECT_GT(v, 0.0) << "A=" << A;
        EXPECT_LE(v, 2.0 * srqsd::exp_e1_scaled(2.0 / A)) << "A=" << A;
    }
}

TEST(SaddExact, IncreasesWithThreshold) {
    EXPECT_LT(srqsd::sadd_exact(ctx_for(15.0)), srqsd::sadd_exact(ctx_for(30.0)));
    EXPECT_LT(srqsd::sadd_exact(ctx_for(30.0)), srqsd::sadd_exact(ctx_for(60.0)));
}

TEST(SaddBounds, DominateExact) {
    for (double A : {threshold(), 15.0, 20.0, 30.0, 50.0}) {
        const auto& ctx = ctx_for(A);
        const double exact = srqsd::sadd_exact(ctx);
        const double slack = 1e-5 * exact;
        EXPECT_LE(exact, srqsd::sadd_upper_gamma(ctx) + slack) << "A=" << A;
        EXPECT_LE(exact, srqsd::sadd_upper_simple(ctx) + slack) << "A=" << A;
        EXPECT_LE(exact, srqsd::sadd_upper_l5(ctx) + slack) << "A=" << A;
    }
}

TEST(SaddBounds, GammaKindIsTightest) {
    for (double A : {20.0, 30.0}) {
        const auto& ctx = ctx_for(A);
        const double gamma = srqsd::sadd_upper_gamma(ctx);
        EXPECT_LE(gamma, srqsd::sadd_upper_simple(ctx)) << "A=" << A;
        EXPECT_LE(gamma, srqsd::sadd_upper_l5(ctx)) << "A=" << A;
    }
}

TEST(SaddBounds, AllPositiveInRealOrderRegime) {
    const auto& ctx = ctx_for(threshold());
    const auto r = srqsd::sadd_report(ctx);
    EXPECT_GT(r.sadd_exact, 0.0);
    EXPECT_GT(r.bound_gamma, 0.0);
    EXPECT_GT(r.bound_simple, 0.0);
    EXPECT_GT(r.bound_l5, 0.0);
}

TEST(SaddBounds, ImaginaryOrderRegimeIsRejected) {
    const auto& ctx = ctx_for(5.0);
    EXPECT_THROW(srqsd::sadd_upper_gamma(ctx), std::domain_error);
    EXPECT_THROW(srqsd::sadd_upper_simple(ctx), std::domain_error);
    EXPECT_THROW(srqsd::sadd_upper_l5(ctx), std::domain_error);
    EXPECT_GT(srqsd::sadd_exact(ctx), 0.0);
}

TEST(SaddReport, AggregatesComponentValues) {
    const auto& ctx = ctx_for(20.0);
    const auto r = srqsd::sadd_report(ctx);
    EXPECT_EQ(r.A, 20.0);
    EXPECT_DOUBLE_EQ(r.sadd_exact, srqsd::sadd_exact(ctx));
    EXPECT_DOUBLE_EQ(r.bound_gamma, srqsd::sadd_upper_gamma(ctx));
    EXPECT_DOUBLE_EQ(r.bound_simple, srqsd::sadd_upper_simple(ctx));
    EXPECT_DOUBLE_EQ(r.bound_l5, srqsd::sadd_upper_l5(ctx));
    EXPECT_GE(r.quadrature_err, 0.0);
    EXPECT_LT(r.quadrature_err, 1e-6);
}

} // namespace
