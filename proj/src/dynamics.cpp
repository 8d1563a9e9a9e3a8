#include "chemoblow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "chemoblow/log.hpp"
#include "chemoblow/operators.hpp"

namespace chemoblow {

void validate(const StepControl& ctl) {
    if (!(ctl.dt_min > 0.0 && ctl.dt_min <= ctl.dt_init && ctl.dt_init <= ctl.dt_max))
        throw std::invalid_argument("StepControl: need 0 < dt_min <= dt_init <= dt_max");
    if (!(ctl.cfl > 0.0 && ctl.cfl <= 1.0))
        throw std::invalid_argument("StepControl: cfl must lie in (0, 1]");
    if (!(ctl.t_end > 0.0)) throw std::invalid_argument("StepControl: t_end must be positive");
    if (!(ctl.u_max_cap > 0.0))
        throw std::invalid_argument("StepControl: u_max_cap must be positive");
}

const char* to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::reached_t_end: return "ReachedTEnd";
        case TerminationReason::sup_norm_cap: return "SupNormCap";
        case TerminationReason::dt_collapse: return "DtCollapse";
        case TerminationReason::non_finite: return "NonFinite";
    }
    return "?";
}

namespace {

// Donor-cell positivity bound for transport by grad(drive): the update
// coefficient of u_i stays nonnegative when dt times the outflow rate of
// cell i is below its volume. Combined with h / max|q| as a ceiling.
double advective_dt_limit(const RadialField& drive, const RadialGrid& g) {
    const int n = g.cells;
    double q_max = 0.0;
    double limit = std::numeric_limits<double>::infinity();
    double q_left = 0.0;  // velocity at face i (zero at the boundary faces)
    for (int i = 0; i < n; ++i) {
        const double q_right = (i + 1 < n) ? (drive[i + 1] - drive[i]) / g.h : 0.0;
        q_max = std::max(q_max, std::abs(q_right));
        const double outflow = g.face_areas[i + 1] * std::max(q_right, 0.0) +
                               g.face_areas[i] * std::max(-q_left, 0.0);
        if (outflow > 0.0) limit = std::min(limit, g.vol_weights[i] / outflow);
        q_left = q_right;
    }
    if (q_max > 0.0) limit = std::min(limit, g.h / q_max);
    return limit;
}

StepStatus check_density(const RadialField& u) {
    if (!all_finite(u)) return StepStatus::non_finite;
    const double cap = 1e-12 * max_abs(u);
    if (min_value(u) < -cap) return StepStatus::positivity_loss;
    return StepStatus::ok;
}

// Shared tail of both steps: explicit advection by grad(drive), then
// implicit diffusion with zero decay.
StepStatus advance_density(const RadialField& u, const RadialField& drive, const RadialGrid& g,
                           double dt, RadialField& out) {
    const RadialField adv = chemo_div(u, drive, g);
    RadialField explicit_part(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) explicit_part[i] = u[i] - dt * adv[i];
    out = implicit_helmholtz_solve(explicit_part, dt, 0.0, g);
    return check_density(out);
}

} // namespace

StepStatus step_full(const FullState& in, const Params& p, const RadialGrid& g, double dt,
                     FullState& out) {
    RadialField v_rhs(in.v.size()), w_rhs(in.w.size());
    for (std::size_t i = 0; i < in.u.size(); ++i) {
        v_rhs[i] = in.v[i] + dt * p.alpha * in.u[i];
        w_rhs[i] = in.w[i] + dt * p.gamma * in.u[i];
    }
    out.v = implicit_helmholtz_solve(v_rhs, dt, p.beta, g);
    out.w = implicit_helmholtz_solve(w_rhs, dt, p.delta, g);
    if (!all_finite(out.v) || !all_finite(out.w)) return StepStatus::non_finite;

    const RadialField drive = lin_comb(p.chi, out.v, -p.xi, out.w);
    const StepStatus st = advance_density(in.u, drive, g, dt, out.u);
    out.t = in.t + dt;
    return st;
}

StepStatus step_reduced(const ReducedState& in, const Params& p, const RadialGrid& g, double dt,
                        ReducedState& out) {
    RadialField z_rhs(in.z.size());
    const double source = p.reduced_source();
    for (std::size_t i = 0; i < in.u.size(); ++i) z_rhs[i] = in.z[i] + dt * source * in.u[i];
    out.z = implicit_helmholtz_solve(z_rhs, dt, p.beta, g);
    if (!all_finite(out.z)) return StepStatus::non_finite;

    const StepStatus st = advance_density(in.u, out.z, g, dt, out.u);
    out.t = in.t + dt;
    return st;
}

double cfl_limit_full(const FullState& s, const Params& p, const RadialGrid& g) {
    return advective_dt_limit(lin_comb(p.chi, s.v, -p.xi, s.w), g);
}

double cfl_limit_reduced(const ReducedState& s, const Params&, const RadialGrid& g) {
    return advective_dt_limit(s.z, g);
}

namespace {

template <class State>
struct SystemTraits;

template <>
struct SystemTraits<FullState> {
    static StepStatus step(const FullState& in, const Params& p, const RadialGrid& g, double dt,
                           FullState& out) {
        return step_full(in, p, g, dt, out);
    }
    static double cfl_limit(const FullState& s, const Params& p, const RadialGrid& g) {
        return cfl_limit_full(s, p, g);
    }
};

template <>
struct SystemTraits<ReducedState> {
    static StepStatus step(const ReducedState& in, const Params& p, const RadialGrid& g, double dt,
                           ReducedState& out) {
        return step_reduced(in, p, g, dt, out);
    }
    static double cfl_limit(const ReducedState& s, const Params& p, const RadialGrid& g) {
        return cfl_limit_reduced(s, p, g);
    }
};

template <class State, class Observer>
IntegrationResult run_integration(State& s, const Params& p, const RadialGrid& g,
                                  const StepControl& ctl, const std::vector<Observer>& observers) {
    validate(ctl);
    require_same_size(s.u, g, "integrate");
    if (!all_finite(s.u)) throw std::invalid_argument("integrate: initial density not finite");
    if (min_value(s.u) < 0.0)
        throw std::invalid_argument("integrate: initial density must be nonnegative");

    IntegrationResult res;
    res.mass_initial = integrate_ball(s.u, g);
    res.u_max_initial = max_abs(s.u);
    res.u_max_peak = res.u_max_initial;

    auto record = [&](const StepInfo& info) {
        res.t_hist.push_back(info.t);
        res.dt_hist.push_back(info.dt);
        res.u_max_hist.push_back(info.u_max);
        for (const auto& obs : observers) obs(s, info);
    };
    record(StepInfo{s.t, 0.0, res.u_max_initial, res.mass_initial, 0});

    double dt_base = std::clamp(ctl.dt_init, ctl.dt_min, ctl.dt_max);
    int clean = 0;
    res.reason = TerminationReason::reached_t_end;

    State next;
    while (s.t < ctl.t_end && (ctl.t_end - s.t) > 1e-14 * ctl.t_end) {
        const double limit = ctl.cfl * SystemTraits<State>::cfl_limit(s, p, g);
        const double dt_eff = std::min({dt_base, limit, ctl.dt_max});
        if (dt_eff < ctl.dt_min) {
            res.reason = TerminationReason::dt_collapse;
            break;
        }
        const double dt = std::min(dt_eff, ctl.t_end - s.t);

        const StepStatus st = SystemTraits<State>::step(s, p, g, dt, next);
        if (st == StepStatus::non_finite) {
            res.reason = TerminationReason::non_finite;
            break;
        }
        if (st == StepStatus::positivity_loss) {
            ++res.rejected;
            clean = 0;
            dt_base = dt / 2.0;
            if (dt_base < ctl.dt_min) {
                res.reason = TerminationReason::dt_collapse;
                break;
            }
            continue;
        }

        s = std::move(next);
        ++res.accepted;
        const double mass = integrate_ball(s.u, g);
        const double u_max = max_abs(s.u);
        res.u_max_peak = std::max(res.u_max_peak, u_max);
        record(StepInfo{s.t, dt, u_max, mass, res.accepted});

        if (u_max >= ctl.u_max_cap) {
            res.reason = TerminationReason::sup_norm_cap;
            break;
        }
        if (++clean >= 10) {
            clean = 0;
            dt_base = std::min(dt_base * 1.2, ctl.dt_max);
        }
    }

    res.t_last = s.t;
    res.mass_final = integrate_ball(s.u, g);
    res.u_max_final = max_abs(s.u);
    CB_LOG_INFO("integrate: %s at t=%.6g after %ld steps (%ld rejected)",
                to_string(res.reason), res.t_last, res.accepted, res.rejected);
    return res;
}

} // namespace

IntegrationResult integrate(FullState& s, const Params& p, const RadialGrid& g,
                            const StepControl& ctl, const std::vector<FullObserver>& observers) {
    return run_integration(s, p, g, ctl, observers);
}

IntegrationResult integrate(ReducedState& s, const Params& p, const RadialGrid& g,
                            const StepControl& ctl, const std::vector<ReducedObserver>& observers) {
    return run_integration(s, p, g, ctl, observers);
}

} // namespace chemoblow
