#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "srqsd/error.hpp"

namespace srqsd {

// Euler scheme run of dR = dt + R dB from r0, absorbed at the first step
// with R >= A (killed runs) or free-running (A = infinity).
struct McConfig {
    double A = std::numeric_limits<double>::infinity();
    double r0 = 0.0;
    double dt = 1e-3;
    double t_end = 100.0;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 0;
    std::vector<double> grid;
};

struct McEstimate {
    std::size_t survivors = 0;
    std::vector<double> grid;
    std::vector<double> cdf_hat;
    std::vector<double> std_err;
    std::vector<double> terminals; // sorted terminal values of surviving paths

    double max_std_err() const {
        double m = 0.0;
        for (double e : std_err) m = std::max(m, e);
        return m;
    }

    // sup_x |F_hat(x) - cdf(x)| over the empirical jump points.
    template <class Cdf>
    double ks_against(Cdf&& cdf) const {
        if (terminals.empty())
            throw degeneracy_error("ks_against: no surviving paths");
        const double n = static_cast<double>(terminals.size());
        double ks = 0.0;
        for (std::size_t i = 0; i < terminals.size(); ++i) {
            const double f = cdf(terminals[i]);
            ks = std::max(ks, std::fabs(f - static_cast<double>(i + 1) / n));
            ks = std::max(ks, std::fabs(f - static_cast<double>(i) / n));
        }
        return ks;
    }

    double terminal_mean() const {
        if (terminals.empty())
            throw degeneracy_error("terminal_mean: no surviving paths");
        double s = 0.0;
        for (double v : terminals) s += v;
        return s / static_cast<double>(terminals.size());
    }

    double terminal_stddev() const {
        if (terminals.size() < 2)
            throw degeneracy_error("terminal_stddev: needs at least two survivors");
        const double m = terminal_mean();
        double s = 0.0;
        for (double v : terminals) s += (v - m) * (v - m);
        return std::sqrt(s / static_cast<double>(terminals.size() - 1));
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// i-th output of the splitmix64 stream started at seed; XOR-free mixing keeps
// the per-path streams of nearby seeds disjoint as sets, not just reordered.
inline std::uint64_t path_seed(std::uint64_t seed, std::uint64_t i) {
    return splitmix64(seed + i * 0x9e3779b97f4a7c15ULL);
}

inline void check_mc_config(const char* who, const McConfig& cfg, bool killed) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
        throw std::domain_error(std::string(who) + ": requires dt > 0");
    if (!(cfg.t_end >= 10.0 * cfg.dt))
        throw std::domain_error(std::string(who) + ": requires t_end >= 10 dt");
    if (cfg.n_paths == 0)
        throw std::domain_error(std::string(who) + ": requires n_paths >= 1");
    if (!(cfg.r0 >= 0.0) || !(cfg.r0 < cfg.A))
        throw std::domain_error(std::string(who) + ": requires r0 in [0, A), got r0 = " +
                                std::to_string(cfg.r0));
    if (killed && !(std::isfinite(cfg.A) && cfg.A > 0.0))
        throw std::domain_error(std::string(who) + ": requires a finite threshold A > 0");
    for (std::size_t i = 1; i < cfg.grid.size(); ++i)
        if (!(cfg.grid[i] > cfg.grid[i - 1]))
            throw std::domain_error(std::string(who) +
                                    ": grid must be strictly increasing");
}

// Terminal values land in per-path slots; reductions run sequentially
// afterwards, so the result is independent of the thread partition.
inline McEstimate run_paths(const char* who, const McConfig& cfg, bool kill,
                            unsigned n_threads) {
    check_mc_config(who, cfg, kill);
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    const double sqrt_dt = std::sqrt(cfg.dt);
    std::vector<double> terminal(cfg.n_paths);

    auto worker = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            std::mt19937_64 eng(path_seed(cfg.seed, static_cast<std::uint64_t>(i)));
            std::normal_distribution<double> normal;
            double r = cfg.r0;
            bool dead = false;
            for (std::size_t k = 0; k < n_steps; ++k) {
                r += cfg.dt + r * sqrt_dt * normal(eng);
                if (r < 0.0) r = 0.0;
                if (kill && r >= cfg.A) {
                    dead = true;
                    break;
                }
            }
            terminal[i] = dead ? std::numeric_limits<double>::quiet_NaN() : r;
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const auto want = static_cast<std::size_t>(n_threads == 0 ? hw : n_threads);
    const std::size_t nt = std::max<std::size_t>(1, std::min(want, cfg.n_paths));
    if (nt == 1) {
        worker(0, cfg.n_paths);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        const std::size_t chunk = (cfg.n_paths + nt - 1) / nt;
        for (std::size_t t = 0; t < nt; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(cfg.n_paths, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    McEstimate est;
    est.grid = cfg.grid;
    est.terminals.reserve(cfg.n_paths);
    for (double v : terminal)
        if (!std::isnan(v)) est.terminals.push_back(v);
    est.survivors = est.terminals.size();
    if (est.survivors == 0)
        throw degeneracy_error(std::string(who) +
                               ": no paths survived to t_end; lower t_end or "
                               "raise n_paths");
    std::sort(est.terminals.begin(), est.terminals.end());
    const double n = static_cast<double>(est.survivors);
    est.cdf_hat.reserve(cfg.grid.size());
    est.std_err.reserve(cfg.grid.size());
    for (double g : cfg.grid) {
        const auto c = std::upper_bound(est.terminals.begin(), est.terminals.end(), g) -
                       est.terminals.begin();
        const double p = static_cast<double>(c) / n;
        est.cdf_hat.push_back(p);
        est.std_err.push_back(std::sqrt(p * (1.0 - p) / n));
    }
    return est;
}

} // namespace detail

inline McEstimate simulate_killed(const McConfig& cfg, unsigned n_threads = 0) {
    return detail::run_paths("simulate_killed", cfg, true, n_threads);
}

inline McEstimate simulate_unrestricted(const McConfig& cfg, unsigned n_threads = 0) {
    return detail::run_paths("simulate_unrestricted", cfg, false, n_threads);
}

} // namespace srqsd
