#pragma once

#include <functional>
#include <vector>

#include "chemoblow/grid.hpp"

namespace chemoblow {

// Model coefficients. alpha..delta generalize the baseline system where
// all four equal 1; the reduction z = chi v - xi w is available exactly
// when beta == delta.
struct Params {
    double chi = 1.0;
    double xi = 0.5;
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double delta = 1.0;

    // Source coefficient of the reduced chemical equation.
    double reduced_source() const { return chi * alpha - xi * gamma; }
};

struct FullState {
    RadialField u, v, w;
    double t = 0.0;
};

struct ReducedState {
    RadialField u, z;
    double t = 0.0;
};

struct StepControl {
    double dt_init = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 1e-2;
    double cfl = 0.5;  // in (0, 1]
    double t_end = 1.0;
    double u_max_cap = 1e12;  // sup-norm blow-up threshold
};

void validate(const StepControl& ctl);

enum class StepStatus { ok, positivity_loss, non_finite };

enum class TerminationReason { reached_t_end, sup_norm_cap, dt_collapse, non_finite };

const char* to_string(TerminationReason r);

// One IMEX step: chemicals first, implicit in diffusion and decay with the
// cell density lagged; then the density, explicit donor-cell advection by
// the combined field chi v - xi w followed by implicit diffusion. Mass is
// conserved to round-off by construction; positivity of u holds under the
// CFL bound below.
StepStatus step_full(const FullState& in, const Params& p, const RadialGrid& g, double dt,
                     FullState& out);
StepStatus step_reduced(const ReducedState& in, const Params& p, const RadialGrid& g, double dt,
                        ReducedState& out);

// Largest advective dt for which the explicit donor-cell update keeps
// every cell nonnegative, combined with the plain h / max|velocity|
// bound. Returns +inf when the transporting field is flat.
double cfl_limit_full(const FullState& s, const Params& p, const RadialGrid& g);
double cfl_limit_reduced(const ReducedState& s, const Params& p, const RadialGrid& g);

struct StepInfo {
    double t = 0.0;
    double dt = 0.0;  // accepted step that produced this state (0 for the initial record)
    double u_max = 0.0;
    double mass = 0.0;
    long step = 0;  // accepted-step counter, 0 for the initial state
};

struct IntegrationResult {
    TerminationReason reason = TerminationReason::reached_t_end;
    double t_last = 0.0;
    long accepted = 0;
    long rejected = 0;
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double u_max_initial = 0.0;
    double u_max_final = 0.0;
    double u_max_peak = 0.0;
    std::vector<double> t_hist;      // per accepted state, starting at t = 0
    std::vector<double> dt_hist;     // step that produced each state (0 first)
    std::vector<double> u_max_hist;  // sup norm per state
};

using FullObserver = std::function<void(const FullState&, const StepInfo&)>;
using ReducedObserver = std::function<void(const ReducedState&, const StepInfo&)>;

// Advances the state to ctl.t_end or stops early (sup-norm cap, dt
// collapse under repeated positivity loss, non-finite values). dt grows
// 1.2x after 10 clean steps, halves on positivity loss, and never
// exceeds the CFL bound. Observers see every accepted state, including
// the initial one.
IntegrationResult integrate(FullState& s, const Params& p, const RadialGrid& g,
                            const StepControl& ctl, const std::vector<FullObserver>& observers = {});
IntegrationResult integrate(ReducedState& s, const Params& p, const RadialGrid& g,
                            const StepControl& ctl,
                            const std::vector<ReducedObserver>& observers = {});

} // namespace chemoblow
