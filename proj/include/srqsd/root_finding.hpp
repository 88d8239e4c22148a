#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "srqsd/error.hpp"

namespace srqsd {

// Stopping rules for bracketed root finding.  x_tol is relative to the
// current iterate; f_tol = 0 keeps iterating on the bracket alone.
struct RootSpec {
    double x_tol = 1e-12;
    double f_tol = 0.0;
    int max_iter = 200;
};

struct RootResult {
    double root = 0.0;
    double f_root = 0.0;
    int iterations = 0;
};

// Brent's method on [lo, hi].  Requires f(lo) and f(hi) of opposite sign
// (bracket_error otherwise); convergence_error carries the last bracket if
// max_iter is exhausted.
template <typename F>
RootResult find_root_bracketed(F&& f, double lo, double hi,
                               const RootSpec& spec = {}) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("find_root_bracketed: invalid interval [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
    if (!(spec.x_tol > 0.0) || spec.f_tol < 0.0 || spec.max_iter < 1)
        throw std::invalid_argument("find_root_bracketed: invalid RootSpec");

    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if ((fa > 0.0) == (fb > 0.0))
        throw bracket_error("find_root_bracketed: no sign change on [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]",
                            fa, fb);

    double c = a, fc = fa;
    double d = b - a, e = d;

    for (int iter = 1; iter <= spec.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = spec.x_tol * (std::fabs(b) + spec.x_tol);
        const double m = 0.5 * (c - b);
        if (std::fabs(m) <= tol || fb == 0.0 || std::fabs(fb) <= spec.f_tol)
            return {b, fb, iter - 1};

        if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
            // Inverse quadratic interpolation, falling back to secant.
            double p, q;
            const double sr = fb / fa;
            if (a == c) {
                p = 2.0 * m * sr;
                q = 1.0 - sr;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = sr * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (sr - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
    }

    if ((fb > 0.0) == (fc > 0.0)) {
        c = a;
        fc = fa;
    }
    const double blo = std::min(b, c), bhi = std::max(b, c);
    throw convergence_error("find_root_bracketed: max_iter=" +
                                std::to_string(spec.max_iter) +
                                " reached, bracket [" + std::to_string(blo) +
                                ", " + std::to_string(bhi) + "]",
                            blo, bhi);
}

} // namespace srqsd
