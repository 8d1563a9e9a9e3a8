#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chemoblow/dynamics.hpp"
#include "chemoblow/energy.hpp"

namespace chemoblow {

// Exponent of the superlinear differential inequality y' >= c2 y^{1/theta}.
double theta_of(int dim);

// Escape time of the lower-bound curve: theta / ((1-theta) c2 y0^{(1-theta)/theta}).
double blowup_time_bound(double y0, double c2, double theta);

// y0 (1 - ((1-theta)/theta) c2 y0^{(1-theta)/theta} t)^{-theta/(1-theta)},
// the exact solution of y' = c2 y^{1/theta}; +inf at and past the escape time.
double ode_lower_bound(double y0, double c2, double theta, double t);

// Largest c2 consistent with the ledger: minimum of the forward-difference
// growth ratios (y_{k+1}-y_k)/dt / y_k^{1/theta} over steps with growing
// y = -F, after dropping the prefix with F >= 0. Empty when fewer than 5
// qualifying steps exist.
std::optional<double> fit_c2(std::span<const EnergyRecord> ledger, double theta);

enum class Verdict { blew_up, completed, inconclusive };

const char* to_string(Verdict v);

struct BlowupReport {
    Verdict verdict = Verdict::inconclusive;
    TerminationReason reason = TerminationReason::reached_t_end;
    double t_last = 0.0;
    double u_max_initial = 0.0;
    double u_max_peak = 0.0;
    double growth = 0.0;  // peak / initial sup norm (0 when the initial is 0)
    double theta = 0.0;
    std::optional<double> c2_fit;
    std::optional<double> t_star_estimate;
    std::vector<double> t_history, u_max_history, dt_history;
};

// BlewUp requires a sup-norm cap or dt collapse together with 100x
// sup-norm growth; reaching t_end is Completed; anything else (including
// non-finite failures) is Inconclusive.
BlowupReport classify(const IntegrationResult& traj, std::span<const EnergyRecord> ledger,
                      const StepControl& ctl, int dim);

struct EquivalenceSeries {
    std::vector<double> t;    // after each accepted step
    std::vector<double> e_z;  // max |(chi v - xi w) - z|
    std::vector<double> e_u;  // max |u_full - u_reduced|
    double max_e_z = 0.0;
    double max_e_u = 0.0;
    double z_scale = 0.0;  // largest |chi v - xi w| seen, for round-off floors
    long steps = 0;
};

// Advances the full and reduced systems side by side with one shared,
// fixed dt sequence and records the per-step deviation. Requires
// beta == delta (the regime where the reduction exists) and throws if
// either system rejects a step at this dt.
EquivalenceSeries lockstep_compare(FullState full, ReducedState reduced, const Params& p,
                                   const RadialGrid& g, double t_end, double dt);

} // namespace chemoblow
