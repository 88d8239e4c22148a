#include "srqsd/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <gtest/gtest.h>

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// E1(1), reference value of the exponential integral.
constexpr double kE1At1 = 0.21938393439552028;

TEST(Quadrature, CubicIsExactOnOnePanel) {
    auto r = srqsd::integrate_adaptive([](double x) { return x * x * x; }, 0.0, 1.0);
    EXPECT_NEAR(r.value, 0.25, 1e-15);
    EXPECT_EQ(r.subdivisions, 0);
}

TEST(Quadrature, SineOverHalfPeriod) {
    auto r = srqsd::integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI);
    EXPECT_NEAR(r.value, 2.0, 2e-12);
    EXPECT_GE(r.error_estimate, std::fabs(r.value - 2.0));
}

TEST(Quadrature, EmptyIntervalIsZero) {
    auto r = srqsd::integrate_adaptive([](double) { return 1.0; }, 3.0, 3.0);
    EXPECT_EQ(r.value, 0.0);
}

TEST(Quadrature, SemiInfiniteExponentialIntegral) {
    auto r = srqsd::integrate_adaptive(
        [](double y) { return std::exp(-y) / y; }, 1.0, kInf);
    EXPECT_NEAR(r.value, kE1At1, 1e-12 * kE1At1);
}

TEST(Quadrature, SemiInfiniteGaussianTail) {
    auto r = srqsd::integrate_adaptive(
        [](double y) { return std::exp(-0.5 * y * y); }, 0.0, kInf);
    EXPECT_NEAR(r.value, std::sqrt(M_PI / 2.0), 1e-12);
}

TEST(Quadrature, StationaryDensityNormalises) {
    // (2/y^2) e^{-2/y} integrates to 1 over (0, inf).
    auto r = srqsd::integrate_adaptive(
        [](double y) {
            if (y <= 0.0) return 0.0;
            return 2.0 / (y * y) * std::exp(-2.0 / y);
        },
        0.0, kInf);
    EXPECT_NEAR(r.value, 1.0, 1e-10);
}

TEST(Quadrature, EndpointSingularitySquareRoot) {
    auto r = srqsd::integrate_adaptive(
        [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
        {1e-10, 1e-14, 2000});
    EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Quadrature, BudgetExhaustionCarriesEstimate) {
    srqsd::QuadratureSpec tight{1e-14, 1e-300, 3};
    try {
        srqsd::integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); },
                                  0.0, 1.0, tight);
        FAIL() << "expected accuracy_error";
    } catch (const srqsd::accuracy_error& e) {
        EXPECT_TRUE(std::isfinite(e.estimate()));
        EXPECT_NEAR(e.estimate(), 2.0, 0.5);
        EXPECT_GT(e.error_estimate(), 0.0);
    }
}

TEST(Quadrature, RejectsBadArguments) {
    auto one = [](double) { return 1.0; };
    EXPECT_THROW(srqsd::integrate_adaptive(one, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(srqsd::integrate_adaptive(one, -kInf, 0.0), std::invalid_argument);
    EXPECT_THROW(srqsd::integrate_adaptive(one, 0.0, std::nan("")), std::invalid_argument);
    srqsd::QuadratureSpec bad;
    bad.rel_tol = 0.0;
    EXPECT_THROW(srqsd::integrate_adaptive(one, 0.0, 1.0, bad), std::invalid_argument);
    bad = {};
    bad.max_subdivisions = 0;
    EXPECT_THROW(srqsd::integrate_adaptive(one, 0.0, 1.0, bad), std::invalid_argument);
}

TEST(Quadrature, OscillatorySmooth) {
    auto r = srqsd::integrate_adaptive(
        [](double x) { return std::cos(20.0 * x); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, std::sin(20.0) / 20.0, 1e-12);
}

} // namespace
