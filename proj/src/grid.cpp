#include "chemoblow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "chemoblow/operators.hpp"

namespace chemoblow {

double RadialGrid::ball_volume() const {
    return sphere_measure * std::pow(radius, dim) / dim;
}

RadialGrid build_grid(double radius, int dim, int cells) {
    if (!(radius > 0.0)) throw std::invalid_argument("build_grid: radius must be positive");
    if (dim < 2) throw std::invalid_argument("build_grid: dimension must be at least 2");
    if (cells < 8) throw std::invalid_argument("build_grid: need at least 8 cells");

    RadialGrid g;
    g.radius = radius;
    g.dim = dim;
    g.cells = cells;
    g.h = radius / cells;
    g.sphere_measure = 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);

    g.r.resize(cells);
    g.vol_weights.resize(cells);
    g.face_areas.resize(cells + 1);

    for (int i = 0; i < cells; ++i) g.r[i] = (i + 0.5) * g.h;
    for (int j = 0; j <= cells; ++j)
        g.face_areas[j] = g.sphere_measure * std::pow(j * g.h, dim - 1);
    for (int i = 0; i < cells; ++i) {
        const double rl = i * g.h;
        const double rr = (i + 1) * g.h;
        g.vol_weights[i] = g.sphere_measure * (std::pow(rr, dim) - std::pow(rl, dim)) / dim;
    }
    return g;
}

RadialField constant_field(const RadialGrid& g, double value) {
    return RadialField(static_cast<std::size_t>(g.cells), value);
}

RadialField lin_comb(double a, const RadialField& x, double b, const RadialField& y) {
    if (x.size() != y.size()) throw std::invalid_argument("lin_comb: size mismatch");
    RadialField out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

bool all_finite(const RadialField& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

double min_value(const RadialField& f) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : f.values) m = std::min(m, v);
    return m;
}

double max_abs(const RadialField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

void require_same_size(const RadialField& f, const RadialGrid& g, const char* who) {
    if (f.size() != static_cast<std::size_t>(g.cells))
        throw std::invalid_argument(std::string(who) + ": field/grid dimension mismatch");
}

double integrate_ball(const RadialField& f, const RadialGrid& g) {
    require_same_size(f, g, "integrate_ball");
    double s = 0.0;
    for (int i = 0; i < g.cells; ++i) s += f[i] * g.vol_weights[i];
    return s;
}

double inner_w12(const RadialField& a, const RadialField& b, const RadialGrid& g) {
    require_same_size(a, g, "inner_w12");
    require_same_size(b, g, "inner_w12");
    double s = 0.0;
    for (int i = 0; i < g.cells; ++i) s += a[i] * b[i] * g.vol_weights[i];
    const FaceField ga = radial_gradient(a, g);
    const FaceField gb = radial_gradient(b, g);
    for (int j = 1; j < g.cells; ++j) s += ga[j] * gb[j] * g.face_areas[j] * g.h;
    return s;
}

double norm_w12(const RadialField& f, const RadialGrid& g) {
    return std::sqrt(inner_w12(f, f, g));
}

double norm_lp(const RadialField& f, const RadialGrid& g, double p) {
    require_same_size(f, g, "norm_lp");
    if (!(p >= 1.0)) throw std::invalid_argument("norm_lp: p must be >= 1");
    double s = 0.0;
    for (int i = 0; i < g.cells; ++i) s += std::pow(std::abs(f[i]), p) * g.vol_weights[i];
    return std::pow(s, 1.0 / p);
}

double norm_l2(const RadialField& f, const RadialGrid& g) {
    require_same_size(f, g, "norm_l2");
    double s = 0.0;
    for (int i = 0; i < g.cells; ++i) s += f[i] * f[i] * g.vol_weights[i];
    return std::sqrt(s);
}

} // namespace chemoblow
