#pragma once

#include <cstddef>
#include <vector>

namespace chemoblow {

// Cell-centered radial mesh for the open ball B(0, R) in R^n. Cells
// i = 0..N-1 have centers r_i = (i + 1/2) h with h = R/N; faces sit at
// j h for j = 0..N. No unknown lives at r = 0, so the 1/r factor of the
// radial Laplacian never needs a special case: the inner face area is
// exactly zero for n >= 2.
//
// vol_weights hold the exact cell volumes omega (r_{i+1}^n - r_i^n)/n
// rather than the midpoint measure omega r_i^{n-1} h. The flux-form
// operators divide by the same weights, which keeps discrete mass
// conservation exact and the Laplacian second order down to the
// innermost cell (the midpoint measure is off by a fixed 25% there for
// n = 3, which would freeze the truncation error at O(1)).
struct RadialGrid {
    double radius = 0.0;
    int dim = 0;    // spatial dimension n >= 2
    int cells = 0;  // cell count N >= 8
    double h = 0.0;
    double sphere_measure = 0.0;      // omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)
    std::vector<double> r;            // cell centers, size N
    std::vector<double> vol_weights;  // exact cell volumes, size N
    std::vector<double> face_areas;   // omega (j h)^{n-1}, size N+1

    double face_r(int j) const { return j * h; }
    double ball_volume() const;  // omega R^n / n
};

RadialGrid build_grid(double radius, int dim, int cells);

// Values of one scalar unknown at the grid cells.
struct RadialField {
    std::vector<double> values;

    RadialField() = default;
    explicit RadialField(std::size_t n, double fill = 0.0) : values(n, fill) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

// Values at the N+1 cell faces (index j lives at radius j h).
struct FaceField {
    std::vector<double> values;

    FaceField() = default;
    explicit FaceField(std::size_t n, double fill = 0.0) : values(n, fill) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

template <class Fn>
RadialField make_field(const RadialGrid& g, Fn&& fn) {
    RadialField f(static_cast<std::size_t>(g.cells));
    for (int i = 0; i < g.cells; ++i) f[i] = fn(g.r[i]);
    return f;
}

RadialField constant_field(const RadialGrid& g, double value);

// a*x + b*y, elementwise.
RadialField lin_comb(double a, const RadialField& x, double b, const RadialField& y);

bool all_finite(const RadialField& f);
double min_value(const RadialField& f);
double max_abs(const RadialField& f);

void require_same_size(const RadialField& f, const RadialGrid& g, const char* who);

// Midpoint-in-r quadrature with the exact volume weights: second order
// for smooth radial integrands, exact for constants.
double integrate_ball(const RadialField& f, const RadialGrid& g);

// int a b + int d_r a d_r b with centered face differences for d_r and
// zero slope at r = 0 and r = R.
double inner_w12(const RadialField& a, const RadialField& b, const RadialGrid& g);

// sqrt(inner_w12(f, f)).
double norm_w12(const RadialField& f, const RadialGrid& g);

double norm_lp(const RadialField& f, const RadialGrid& g, double p);
double norm_l2(const RadialField& f, const RadialGrid& g);

} // namespace chemoblow
