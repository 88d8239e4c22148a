#include "srqsd/eigenvalue.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

namespace {

TEST(OrderZeroThreshold, MatchesKnownLocation) {
    const double at = srqsd::order_zero_threshold();
    EXPECT_NEAR(at, 10.240465, 5e-4);
}

TEST(SolveLambda, OneEighthAtOrderZeroThreshold) {
    const double at = srqsd::order_zero_threshold();
    const auto ctx = srqsd::solve_lambda(at);
    EXPECT_NEAR(ctx.lambda, 0.125, 1e-8);
    EXPECT_EQ(ctx.regime, srqsd::OrderRegime::real_order);
}

TEST(SolveLambda, StaysInsideClassicBracket) {
    const double at = srqsd::order_zero_threshold();
    for (double A : {1.0, 2.0, 5.0, 10.0, at, 15.0, 20.0, 30.0, 50.0, 100.0}) {
        const auto [lo, hi] = srqsd::lambda_bracket_classic(A);
        const auto ctx = srqsd::solve_lambda(A);
        EXPECT_GT(ctx.lambda, lo) << "A=" << A;
        EXPECT_LT(ctx.lambda, hi) << "A=" << A;
        EXPECT_LE(std::fabs(ctx.residual), 1e-12) << "A=" << A;
        EXPECT_EQ(ctx.regime, A < at ? srqsd::OrderRegime::imaginary_order
                                     : srqsd::OrderRegime::real_order)
            << "A=" << A;
    }
}

TEST(SolveLambda, DecreasesWithThreshold) {
    const double at = srqsd::order_zero_threshold();
    const std::vector<double> grid{1.0, 2.0, 5.0, 10.0, at, 15.0, 20.0, 30.0, 50.0, 100.0};
    double prev = srqsd::solve_lambda(grid.front()).lambda;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = srqsd::solve_lambda(grid[i]).lambda;
        EXPECT_LT(cur, prev) << "A=" << grid[i];
        prev = cur;
    }
}

TEST(SolveLambda, ApproachesReciprocalThreshold) {
    double prev = std::fabs(100.0 * srqsd::solve_lambda(100.0).lambda - 1.0);
    for (double A : {1000.0, 10000.0}) {
        const double cur = std::fabs(A * srqsd::solve_lambda(A).lambda - 1.0);
        EXPECT_LT(cur, prev) << "A=" << A;
        prev = cur;
    }
}

TEST(SolveLambda, ResidualChangesSignAcrossBracket) {
    const auto [lo, hi] = srqsd::lambda_bracket_classic(20.0);
    const double glo = srqsd::eigen_residual(20.0, lo);
    const double ghi = srqsd::eigen_residual(20.0, hi);
    EXPECT_LT(glo * ghi, 0.0);
}

TEST(SolveLambda, XiConsistentWithLambda) {
    const auto ctx = srqsd::solve_lambda(20.0);
    EXPECT_NEAR(ctx.xi() * ctx.xi(), 1.0 - 8.0 * ctx.lambda, 1e-14);
    EXPECT_NEAR(ctx.s, 0.25 * (1.0 - 8.0 * ctx.lambda), 1e-16);
}

TEST(SolveLambda, XiThrowsInImaginaryRegime) {
    const auto ctx = srqsd::solve_lambda(5.0);
    EXPECT_EQ(ctx.regime, srqsd::OrderRegime::imaginary_order);
    EXPECT_THROW(ctx.xi(), srqsd::regime_error);
}

TEST(SolveLambda, RejectsBadThreshold) {
    EXPECT_THROW(srqsd::solve_lambda(0.0), std::domain_error);
    EXPECT_THROW(srqsd::solve_lambda(-3.0), std::domain_error);
    EXPECT_THROW(srqsd::solve_lambda(std::nan("")), std::domain_error);
}

TEST(LambdaBounds, LadderOrdering) {
    for (double A : {15.0, 20.0, 30.0, 50.0}) {
        const double lam = srqsd::solve_lambda(A).lambda;
        const double simple = srqsd::lambda_lower_simple(A);
        const double moment = srqsd::lambda_lower_moment(A);
        const double gamma = srqsd::lambda_lower_gamma(A);
        const double upper = srqsd::lambda_upper_e1(A);
        EXPECT_LE(simple, moment) << "A=" << A;
        EXPECT_LE(moment, lam) << "A=" << A;
        EXPECT_LE(lam, upper) << "A=" << A;
        EXPECT_LE(gamma, lam) << "A=" << A;
        EXPECT_GE(gamma, simple) << "A=" << A;
    }
}

TEST(LambdaBounds, GammaBoundValidBelowOrderZeroThreshold) {
    for (double A : {1.0, 5.0}) {
        const double lam = srqsd::solve_lambda(A).lambda;
        EXPECT_LE(srqsd::lambda_lower_gamma(A), lam) << "A=" << A;
        EXPECT_LE(lam, srqsd::lambda_upper_e1(A)) << "A=" << A;
    }
}

TEST(LambdaBounds, MomentBoundRequiresRealOrderRegime) {
    EXPECT_THROW(srqsd::lambda_lower_moment(5.0), std::domain_error);
    EXPECT_NO_THROW(srqsd::lambda_lower_moment(srqsd::order_zero_threshold()));
}

TEST(LambdaBounds, UpperDenominatorPositiveEverywhere) {
    for (double A : {0.2, 1.0, 3.0, 10.0, 1e4}) {
        const double up = srqsd::lambda_upper_e1(A);
        EXPECT_GT(up, 0.0) << "A=" << A;
        EXPECT_TRUE(std::isfinite(up)) << "A=" << A;
    }
}

} // namespace

TEST(SolveLambda, ThresholdContextClassifiesRealOrder) {
    const double thr = srqsd::order_zero_threshold();
    const auto ctx = srqsd::solve_lambda(thr);
    EXPECT_EQ(ctx.regime, srqsd::OrderRegime::real_order);
    EXPECT_EQ(ctx.s, 0.0);
    EXPECT_EQ(ctx.xi(), 0.0);
    const auto below = srqsd::solve_lambda(10.240465);
    EXPECT_EQ(below.regime, srqsd::OrderRegime::imaginary_order);
}
