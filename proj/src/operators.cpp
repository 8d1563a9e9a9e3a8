#include "chemoblow/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace chemoblow {

RadialField laplacian(const RadialField& f, const RadialGrid& g) {
    require_same_size(f, g, "laplacian");
    const int n = g.cells;
    RadialField out(n);
    // flux[j] = a_j (f_j - f_{j-1}) / h at interior faces, zero at j = 0, N
    double flux_left = 0.0;
    for (int i = 0; i < n; ++i) {
        const double flux_right =
            (i + 1 < n) ? g.face_areas[i + 1] * (f[i + 1] - f[i]) / g.h : 0.0;
        out[i] = (flux_right - flux_left) / g.vol_weights[i];
        flux_left = flux_right;
    }
    return out;
}

RadialField chemo_div(const RadialField& u, const RadialField& s, const RadialGrid& g) {
    require_same_size(u, g, "chemo_div");
    require_same_size(s, g, "chemo_div");
    const int n = g.cells;
    RadialField out(n);
    double flux_left = 0.0;
    for (int i = 0; i < n; ++i) {
        double flux_right = 0.0;
        if (i + 1 < n) {
            const double q = (s[i + 1] - s[i]) / g.h;
            const double upwind = (q >= 0.0) ? u[i] : u[i + 1];
            flux_right = g.face_areas[i + 1] * q * upwind;
        }
        out[i] = (flux_right - flux_left) / g.vol_weights[i];
        flux_left = flux_right;
    }
    return out;
}

FaceField radial_gradient(const RadialField& f, const RadialGrid& g) {
    require_same_size(f, g, "radial_gradient");
    const int n = g.cells;
    FaceField out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 1; j < n; ++j) out[j] = (f[j] - f[j - 1]) / g.h;
    return out;
}

double face_quadrature(const FaceField& v, const RadialGrid& g) {
    if (v.size() != static_cast<std::size_t>(g.cells) + 1)
        throw std::invalid_argument("face_quadrature: face field/grid dimension mismatch");
    double s = 0.0;
    for (int j = 1; j < g.cells; ++j) s += v[j] * g.face_areas[j] * g.h;
    return s;
}

namespace {

// One tridiagonal solve of (I - dt Lap + dt decay) x = rhs.
void thomas_solve(const std::vector<double>& lower, const std::vector<double>& diag,
                  const std::vector<double>& upper, const double* rhs, double* x, int n,
                  std::vector<double>& c_star, std::vector<double>& d_star) {
    c_star[0] = upper[0] / diag[0];
    d_star[0] = rhs[0] / diag[0];
    for (int i = 1; i < n; ++i) {
        const double m = 1.0 / (diag[i] - lower[i] * c_star[i - 1]);
        c_star[i] = upper[i] * m;
        d_star[i] = (rhs[i] - lower[i] * d_star[i - 1]) * m;
    }
    x[n - 1] = d_star[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = d_star[i] - c_star[i] * x[i + 1];
}

} // namespace

RadialField implicit_helmholtz_solve(const RadialField& rhs, double dt, double decay,
                                     const RadialGrid& g) {
    require_same_size(rhs, g, "implicit_helmholtz_solve");
    if (!(dt > 0.0)) throw std::invalid_argument("implicit_helmholtz_solve: dt must be positive");
    if (decay < 0.0) throw std::invalid_argument("implicit_helmholtz_solve: decay must be >= 0");

    const int n = g.cells;
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double cl = (i > 0) ? dt * g.face_areas[i] / (g.h * g.vol_weights[i]) : 0.0;
        const double cr = (i + 1 < n) ? dt * g.face_areas[i + 1] / (g.h * g.vol_weights[i]) : 0.0;
        lower[i] = -cl;
        upper[i] = -cr;
        diag[i] = 1.0 + dt * decay + cl + cr;
    }

    RadialField x(n);
    std::vector<double> c_star(n), d_star(n);
    thomas_solve(lower, diag, upper, rhs.values.data(), x.values.data(), n, c_star, d_star);

    // One step of iterative refinement keeps the residual at round-off
    // even when dt/h^2 is large.
    std::vector<double> resid(n), corr(n);
    for (int i = 0; i < n; ++i) {
        double ax = diag[i] * x[i];
        if (i > 0) ax += lower[i] * x[i - 1];
        if (i + 1 < n) ax += upper[i] * x[i + 1];
        resid[i] = rhs[i] - ax;
    }
    thomas_solve(lower, diag, upper, resid.data(), corr.data(), n, c_star, d_star);
    for (int i = 0; i < n; ++i) x[i] += corr[i];
    return x;
}

} // namespace chemoblow
