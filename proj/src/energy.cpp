#include "chemoblow/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "chemoblow/errors.hpp"
#include "chemoblow/operators.hpp"

namespace chemoblow {

namespace {

double xlnx(double x) {
    return (x < 1e-300) ? 0.0 : x * std::log(x);
}

void require_positive_density(const RadialField& u, const char* who) {
    if (min_value(u) <= 0.0)
        throw NonPositiveDensity(std::string(who) + ": density has a non-positive entry");
}

} // namespace

double energy_F(const RadialField& u, const RadialField& z, const Params& p, const RadialGrid& g) {
    require_same_size(u, g, "energy_F");
    require_same_size(z, g, "energy_F");
    require_positive_density(u, "energy_F");

    const double coef = p.chi - p.xi;
    FaceField grad = radial_gradient(z, g);
    for (double& v : grad.values) v *= v;
    const double grad_sq = face_quadrature(grad, g);

    double z_sq = 0.0, coupling = 0.0, entropy = 0.0;
    for (int i = 0; i < g.cells; ++i) {
        z_sq += z[i] * z[i] * g.vol_weights[i];
        coupling += u[i] * z[i] * g.vol_weights[i];
        entropy += xlnx(u[i]) * g.vol_weights[i];
    }
    return 0.5 * grad_sq + 0.5 * z_sq - coef * coupling + coef * entropy;
}

double energy_G(const RadialField& u, const RadialField& v, const RadialField& w, const Params& p,
                const RadialGrid& g) {
    return energy_F(u, lin_comb(p.chi, v, -p.xi, w), p, g);
}

double dissipation_D(const RadialField& u, const RadialField& z, const Params& p,
                     const RadialGrid& g) {
    require_same_size(u, g, "dissipation_D");
    require_same_size(z, g, "dissipation_D");
    require_positive_density(u, "dissipation_D");

    const double coef = p.chi - p.xi;
    const RadialField lap_z = laplacian(z, g);
    double zt_sq = 0.0;
    for (int i = 0; i < g.cells; ++i) {
        const double zt = lap_z[i] - z[i] + coef * u[i];
        zt_sq += zt * zt * g.vol_weights[i];
    }

    FaceField drift(static_cast<std::size_t>(g.cells) + 1, 0.0);
    for (int j = 1; j < g.cells; ++j) {
        const double ul = u[j - 1];
        const double ur = u[j];
        const double u_face = 2.0 * ul * ur / (ul + ur);  // harmonic mean
        const double g_ln = (std::log(ur) - std::log(ul)) / g.h;
        const double g_z = (z[j] - z[j - 1]) / g.h;
        const double d = g_ln - g_z;
        drift[j] = u_face * d * d;
    }
    return zt_sq + coef * face_quadrature(drift, g);
}

RadialField floor_density(const RadialField& u, double floor) {
    RadialField out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::max(u[i], floor);
    return out;
}

InequalityReport check_energy_inequality(std::span<const EnergyRecord> ledger, double tol) {
    if (ledger.size() < 2)
        throw std::invalid_argument("check_energy_inequality: need at least 2 records");

    InequalityReport rep;
    rep.tol = tol;
    rep.steps = ledger.size() - 1;
    double max_r = -std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    for (std::size_t k = 0; k + 1 < ledger.size(); ++k) {
        const double dt = ledger[k + 1].dt;
        if (!(dt > 0.0))
            throw std::invalid_argument("check_energy_inequality: non-positive step in ledger");
        const double r = (ledger[k + 1].F - ledger[k].F) / dt + ledger[k].D;
        if (r > max_r) {
            max_r = r;
            rep.max_residual_t = ledger[k].t;
        }
        if (r > tol) ++violations;
    }
    rep.max_residual = max_r;
    rep.violation_fraction = static_cast<double>(violations) / static_cast<double>(rep.steps);
    rep.passes = max_r <= tol;
    return rep;
}

double default_energy_tol(double F0, double t_end) {
    return 1e-4 * (std::abs(F0) + 1.0) / t_end;
}

FullObserver ledger_observer(std::vector<EnergyRecord>& out, const Params& p,
                             const RadialGrid& g) {
    return [&out, p, &g](const FullState& s, const StepInfo& info) {
        const RadialField u = floor_density(s.u);
        const RadialField z = lin_comb(p.chi, s.v, -p.xi, s.w);
        out.push_back(EnergyRecord{info.t, energy_F(u, z, p, g), dissipation_D(u, z, p, g),
                                   info.mass, info.u_max, info.dt});
    };
}

ReducedObserver ledger_observer_reduced(std::vector<EnergyRecord>& out, const Params& p,
                                        const RadialGrid& g) {
    return [&out, p, &g](const ReducedState& s, const StepInfo& info) {
        const RadialField u = floor_density(s.u);
        out.push_back(EnergyRecord{info.t, energy_F(u, s.z, p, g), dissipation_D(u, s.z, p, g),
                                   info.mass, info.u_max, info.dt});
    };
}

} // namespace chemoblow
