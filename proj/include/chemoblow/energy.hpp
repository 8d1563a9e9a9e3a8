#pragma once

#include <span>
#include <vector>

#include "chemoblow/dynamics.hpp"
#include "chemoblow/grid.hpp"

namespace chemoblow {

// Per-step ledger entry. dt is the accepted step that produced the state
// (0 for the initial record), so the residual of the energy inequality
// between records k and k+1 uses dt from record k+1.
struct EnergyRecord {
    double t = 0.0;
    double F = 0.0;
    double D = 0.0;
    double mass = 0.0;
    double u_max = 0.0;
    double dt = 0.0;
};

// F(u, z) = 1/2 int |grad z|^2 + 1/2 int z^2 - (chi-xi) int u z
//           + (chi-xi) int u ln u.
// Throws NonPositiveDensity when any u_i <= 0; u ln u uses the continuous
// extension 0 ln 0 = 0 below 1e-300.
double energy_F(const RadialField& u, const RadialField& z, const Params& p, const RadialGrid& g);

// G(u, v, w) = F(u, chi v - xi w); evaluated through the same code path,
// so the identity holds to round-off by construction.
double energy_G(const RadialField& u, const RadialField& v, const RadialField& w, const Params& p,
                const RadialGrid& g);

// D(u, z) = int z_t^2 + (chi-xi) int u |grad ln u - grad z|^2 with z_t
// assembled from the discrete equation z_t = Lap z - z + (chi-xi) u (not
// temporal differencing) and harmonic-mean face densities.
double dissipation_D(const RadialField& u, const RadialField& z, const Params& p,
                     const RadialGrid& g);

// Clamps a density from below; used by observers that must evaluate the
// functionals on states carrying round-off-level negative cells.
RadialField floor_density(const RadialField& u, double floor = 1e-300);

struct InequalityReport {
    double max_residual = 0.0;    // max_k (F_{k+1} - F_k)/dt + D_k
    double max_residual_t = 0.0;  // time of the worst step
    double violation_fraction = 0.0;
    double tol = 0.0;
    bool passes = false;
    std::size_t steps = 0;
};

// Residual check of dF/dt <= -D along a ledger. Violations of a
// splitting scheme shrink at first order under dt refinement; tol is the
// caller's admissible scale (see default_energy_tol).
InequalityReport check_energy_inequality(std::span<const EnergyRecord> ledger, double tol);

double default_energy_tol(double F0, double t_end);

// Observers that append one EnergyRecord per accepted state.
FullObserver ledger_observer(std::vector<EnergyRecord>& out, const Params& p, const RadialGrid& g);
ReducedObserver ledger_observer_reduced(std::vector<EnergyRecord>& out, const Params& p,
                                        const RadialGrid& g);

} // namespace chemoblow
