#pragma once

// Shared test helpers: independent quadrature oracles, random field
// generators, and refinement-order bookkeeping. Everything here stays
// independent of the discretization under test.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "chemoblow/grid.hpp"

namespace testsupport {

// Plain 1-D midpoint rule at high resolution; the reference for radial
// integrals over the ball.
template <class Fn>
double midpoint_1d(Fn&& fn, double a, double b, long n = 1'000'000) {
    const double h = (b - a) / n;
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += fn(a + (i + 0.5) * h);
    return s * h;
}

inline double sphere_measure(int dim) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

// omega int_0^R fn(r) r^{n-1} dr by the midpoint rule.
template <class Fn>
double ball_integral_oracle(Fn&& fn, double R, int dim, long n = 1'000'000) {
    return sphere_measure(dim) *
           midpoint_1d([&](double r) { return fn(r) * std::pow(r, dim - 1); }, 0.0, R, n);
}

inline double rel_err(double got, double want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

inline double observed_order(double coarse_err, double fine_err, double ratio = 2.0) {
    return std::log(coarse_err / fine_err) / std::log(ratio);
}

// Smooth strictly positive random field: a few random Fourier-in-r modes
// on top of a positive offset, flat at r = 0 and r = R so the data is
// compatible with the Neumann boundaries.
inline chemoblow::RadialField random_smooth_positive(const chemoblow::RadialGrid& g,
                                                     std::mt19937_64& rng, double lo = 0.5,
                                                     double amp = 0.4) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const double a1 = coef(rng), a2 = coef(rng), a3 = coef(rng);
    chemoblow::RadialField f(static_cast<std::size_t>(g.cells));
    for (int i = 0; i < g.cells; ++i) {
        const double x = g.r[i] / g.radius;
        const double wiggle = a1 * std::cos(std::numbers::pi * x) +
                              a2 * std::cos(2.0 * std::numbers::pi * x) +
                              a3 * std::cos(3.0 * std::numbers::pi * x);
        f[i] = lo + amp * (1.0 + wiggle / 3.0);
    }
    return f;
}

// Rough strictly positive random field (cell-by-cell noise).
inline chemoblow::RadialField random_rough_positive(const chemoblow::RadialGrid& g,
                                                    std::mt19937_64& rng, double lo = 0.2,
                                                    double hi = 2.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    chemoblow::RadialField f(static_cast<std::size_t>(g.cells));
    for (int i = 0; i < g.cells; ++i) f[i] = dist(rng);
    return f;
}

} // namespace testsupport
