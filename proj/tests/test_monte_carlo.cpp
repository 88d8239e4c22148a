#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "srqsd/distribution.hpp"
#include "srqsd/eigenvalue.hpp"
#include "srqsd/monte_carlo.hpp"

namespace {

srqsd::McConfig killed_config() {
    srqsd::McConfig cfg;
    cfg.A = 20.0;
    cfg.r0 = 5.0;
    cfg.dt = 2e-3;
    cfg.t_end = 50.0;
    cfg.n_paths = 6000;
    cfg.seed = 2026;
    for (int i = 1; i <= 40; ++i) cfg.grid.push_back(0.5 * i);
    return cfg;
}

TEST(McConfigChecks, RejectsInvalidParameters) {
    srqsd::McConfig cfg = killed_config();
    cfg.r0 = 20.0;
    EXPECT_THROW(srqsd::simulate_killed(cfg), std::domain_error);
    cfg.r0 = -1.0;
    EXPECT_THROW(srqsd::simulate_killed(cfg), std::domain_error);
    cfg = killed_config();
    cfg.dt = 0.0;
    EXPECT_THROW(srqsd::simulate_killed(cfg), std::domain_error);
    cfg = killed_config();
    cfg.t_end = 5.0 * cfg.dt;
    EXPECT_THROW(srqsd::simulate_killed(cfg), std::domain_error);
    cfg = killed_config();
    cfg.n_paths = 0;
    EXPECT_THROW(srqsd::simulate_killed(cfg), std::domain_error);
    cfg = killed_config();
    cfg.A = std::numeric_limits<double>::infinity();
    EXPECT_THROW(srqsd::simulate_killed(cfg), std::domain_error);
    cfg = killed_config();
    cfg.grid = {1.0, 1.0};
    EXPECT_THROW(srqsd::simulate_killed(cfg), std::domain_error);
}

TEST(McDeterminism, SameSeedIsBitIdentical) {
    srqsd::McConfig cfg = killed_config();
    cfg.n_paths = 400;
    cfg.t_end = 10.0;
    const auto a = srqsd::simulate_killed(cfg);
    const auto b = srqsd::simulate_killed(cfg);
    EXPECT_EQ(a.survivors, b.survivors);
    EXPECT_EQ(a.terminals, b.terminals);
    EXPECT_EQ(a.cdf_hat, b.cdf_hat);
    EXPECT_EQ(a.std_err, b.std_err);
}

TEST(McDeterminism, ResultIndependentOfThreadCount) {
    srqsd::McConfig cfg = killed_config();
    cfg.n_paths = 400;
    cfg.t_end = 10.0;
    const auto a = srqsd::simulate_killed(cfg, 1);
    const auto b = srqsd::simulate_killed(cfg, 3);
    const auto c = srqsd::simulate_killed(cfg, 7);
    EXPECT_EQ(a.terminals, b.terminals);
    EXPECT_EQ(a.terminals, c.terminals);
    EXPECT_EQ(a.cdf_hat, b.cdf_hat);
}

TEST(McDeterminism, SeedChangesDrawDifferentPaths) {
    srqsd::McConfig cfg = killed_config();
    cfg.n_paths = 200;
    cfg.t_end = 10.0;
    const auto a = srqsd::simulate_killed(cfg);
    cfg.seed += 1;
    const auto b = srqsd::simulate_killed(cfg);
    EXPECT_NE(a.terminals, b.terminals);
}

TEST(McEstimateShape, CdfHatIsAValidCdfEstimate) {
    const srqsd::McConfig cfg = killed_config();
    const auto est = srqsd::simulate_killed(cfg);
    ASSERT_EQ(est.grid.size(), cfg.grid.size());
    ASSERT_EQ(est.cdf_hat.size(), cfg.grid.size());
    ASSERT_EQ(est.std_err.size(), cfg.grid.size());
    EXPECT_LE(est.survivors, cfg.n_paths);
    EXPECT_GT(est.survivors, 100u);
    EXPECT_TRUE(std::is_sorted(est.terminals.begin(), est.terminals.end()));
    for (std::size_t i = 0; i < est.cdf_hat.size(); ++i) {
        EXPECT_GE(est.cdf_hat[i], 0.0);
        EXPECT_LE(est.cdf_hat[i], 1.0);
        EXPECT_GE(est.std_err[i], 0.0);
        if (i > 0) {
            EXPECT_GE(est.cdf_hat[i], est.cdf_hat[i - 1]);
        }
    }
    EXPECT_DOUBLE_EQ(est.cdf_hat.back(), 1.0);
    for (double v : est.terminals) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, cfg.A);
    }
}

TEST(McEstimateShape, AllPathsAbsorbedThrowsDegeneracy) {
    srqsd::McConfig cfg;
    cfg.A = 1.2;
    cfg.r0 = 0.5;
    cfg.dt = 1e-3;
    cfg.t_end = 30.0;
    cfg.n_paths = 100;
    cfg.seed = 5;
    EXPECT_THROW(srqsd::simulate_killed(cfg), srqsd::degeneracy_error);
}

TEST(McKilled, LongRunSurvivorsMatchAnalyticLaw) {
    const srqsd::McConfig cfg = killed_config();
    const auto est = srqsd::simulate_killed(cfg);
    const auto ctx = srqsd::solve_lambda(cfg.A);
    const double ks = est.ks_against([&](double x) { return srqsd::qsd_cdf(ctx, x); });
    EXPECT_LE(ks, 3.0 * est.max_std_err());
}

TEST(McKilled, InitialPointIsForgotten) {
    srqsd::McConfig cfg = killed_config();
    cfg.n_paths = 4000;
    cfg.r0 = 1.0;
    cfg.seed = 40;
    const auto low = srqsd::simulate_killed(cfg);
    cfg.r0 = 10.0;
    cfg.seed = 41;
    const auto high = srqsd::simulate_killed(cfg);
    double dist = 0.0;
    for (std::size_t i = 0; i < cfg.grid.size(); ++i)
        dist = std::max(dist, std::fabs(low.cdf_hat[i] - high.cdf_hat[i]));
    const double combined = std::sqrt(low.max_std_err() * low.max_std_err() +
                                      high.max_std_err() * high.max_std_err());
    EXPECT_LE(dist, 3.0 * combined);
}

TEST(McKilled, HalvingTheStepKeepsTheFitStable) {
    srqsd::McConfig cfg = killed_config();
    cfg.n_paths = 2500;
    cfg.t_end = 40.0;
    cfg.seed = 3;
    const auto ctx = srqsd::solve_lambda(cfg.A);
    auto fit = [&](double dt) {
        cfg.dt = dt;
        const auto est = srqsd::simulate_killed(cfg);
        const double ks = est.ks_against([&](double x) { return srqsd::qsd_cdf(ctx, x); });
        const double floor = 0.5 / std::sqrt(static_cast<double>(est.survivors));
        return std::pair<double, double>{ks, floor};
    };
    const auto [k1, f1] = fit(2e-3);
    const auto [k2, f2] = fit(1e-3);
    EXPECT_LE(std::fabs(k1 - k2), 3.0 * (f1 + f2));
}

TEST(McUnrestricted, RelaxesToStationaryLaw) {
    srqsd::McConfig cfg;
    cfg.r0 = 1.0;
    cfg.dt = 2e-3;
    cfg.t_end = 48.0;
    cfg.n_paths = 2500;
    cfg.seed = 7;
    for (int i = 1; i <= 40; ++i) cfg.grid.push_back(0.5 * i);
    const auto est = srqsd::simulate_unrestricted(cfg);
    EXPECT_EQ(est.survivors, cfg.n_paths);
    const double ks = est.ks_against(srqsd::stationary_cdf);
    EXPECT_LE(ks, 3.0 * est.max_std_err());
    const double median = est.terminals[est.terminals.size() / 2];
    const double se = 0.5 / std::sqrt(static_cast<double>(cfg.n_paths));
    EXPECT_NEAR(srqsd::stationary_cdf(median), 0.5, 3.0 * se);
    EXPECT_NEAR(median, 2.0 / std::log(2.0), 0.2);
}

TEST(McUnrestricted, DriftCompensatedMeanIsAMartingale) {
    srqsd::McConfig cfg;
    cfg.r0 = 1.0;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.n_paths = 20000;
    cfg.seed = 11;
    const auto est = srqsd::simulate_unrestricted(cfg);
    const double se = est.terminal_stddev() / std::sqrt(static_cast<double>(cfg.n_paths));
    EXPECT_NEAR(est.terminal_mean(), cfg.r0 + cfg.t_end, 4.0 * se);
}

} // namespace
