#include "chemoblow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chemoblow {

double theta_of(int dim) {
    if (dim < 2) throw std::invalid_argument("theta_of: dimension must be at least 2");
    return (dim + 2.0) / (dim + 4.0);
}

double blowup_time_bound(double y0, double c2, double theta) {
    if (!(y0 > 0.0 && c2 > 0.0 && theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("blowup_time_bound: need y0 > 0, c2 > 0, theta in (0,1)");
    return theta / ((1.0 - theta) * c2 * std::pow(y0, (1.0 - theta) / theta));
}

double ode_lower_bound(double y0, double c2, double theta, double t) {
    const double t_star = blowup_time_bound(y0, c2, theta);
    if (t >= t_star) return std::numeric_limits<double>::infinity();
    const double base = 1.0 - ((1.0 - theta) / theta) * c2 * std::pow(y0, (1.0 - theta) / theta) * t;
    return y0 * std::pow(base, -theta / (1.0 - theta));
}

std::optional<double> fit_c2(std::span<const EnergyRecord> ledger, double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("fit_c2: theta must lie in (0,1)");

    // Drop the prefix where F >= 0: the bound's hypothesis is y = -F > 0.
    std::size_t k0 = 0;
    while (k0 < ledger.size() && !(ledger[k0].F < 0.0)) ++k0;

    double c2 = std::numeric_limits<double>::infinity();
    long qualifying = 0;
    for (std::size_t k = k0; k + 1 < ledger.size(); ++k) {
        const double yk = -ledger[k].F;
        const double yk1 = -ledger[k + 1].F;
        const double dt = ledger[k + 1].dt;
        if (!(yk > 0.0) || !(yk1 > yk) || !(dt > 0.0)) continue;
        if (!std::isfinite(yk) || !std::isfinite(yk1)) continue;
        const double ratio = ((yk1 - yk) / dt) / std::pow(yk, 1.0 / theta);
        c2 = std::min(c2, ratio);
        ++qualifying;
    }
    if (qualifying < 5) return std::nullopt;
    return c2;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::blew_up: return "BlewUp";
        case Verdict::completed: return "Completed";
        case Verdict::inconclusive: return "Inconclusive";
    }
    return "?";
}

BlowupReport classify(const IntegrationResult& traj, std::span<const EnergyRecord> ledger,
                      const StepControl& ctl, int dim) {
    (void)ctl;
    BlowupReport rep;
    rep.reason = traj.reason;
    rep.t_last = traj.t_last;
    rep.u_max_initial = traj.u_max_initial;
    rep.u_max_peak = traj.u_max_peak;
    rep.growth = traj.u_max_initial > 0.0 ? traj.u_max_peak / traj.u_max_initial : 0.0;
    rep.theta = theta_of(dim);
    rep.t_history = traj.t_hist;
    rep.u_max_history = traj.u_max_hist;
    rep.dt_history = traj.dt_hist;

    const bool stopped_hard = traj.reason == TerminationReason::sup_norm_cap ||
                              traj.reason == TerminationReason::dt_collapse;
    if (stopped_hard && rep.growth >= 100.0) {
        rep.verdict = Verdict::blew_up;
    } else if (traj.reason == TerminationReason::reached_t_end) {
        rep.verdict = Verdict::completed;
    } else {
        rep.verdict = Verdict::inconclusive;
    }

    rep.c2_fit = fit_c2(ledger, rep.theta);
    if (rep.c2_fit && !ledger.empty() && ledger.front().F < 0.0) {
        rep.t_star_estimate = blowup_time_bound(-ledger.front().F, *rep.c2_fit, rep.theta);
    }
    return rep;
}

EquivalenceSeries lockstep_compare(FullState full, ReducedState reduced, const Params& p,
                                   const RadialGrid& g, double t_end, double dt) {
    if (p.beta != p.delta)
        throw std::invalid_argument("lockstep_compare: reduction needs beta == delta");
    if (!(dt > 0.0 && t_end > 0.0))
        throw std::invalid_argument("lockstep_compare: dt and t_end must be positive");

    EquivalenceSeries series;
    FullState next_full;
    ReducedState next_reduced;
    double t = 0.0;
    while (t < t_end && (t_end - t) > 1e-14 * t_end) {
        const double step = std::min(dt, t_end - t);
        const StepStatus sf = step_full(full, p, g, step, next_full);
        const StepStatus sr = step_reduced(reduced, p, g, step, next_reduced);
        if (sf != StepStatus::ok || sr != StepStatus::ok)
            throw std::runtime_error("lockstep_compare: step rejected at fixed dt");
        full = std::move(next_full);
        reduced = std::move(next_reduced);
        t = full.t;

        double ez = 0.0, eu = 0.0, zs = 0.0;
        for (std::size_t i = 0; i < reduced.z.size(); ++i) {
            const double combo = p.chi * full.v[i] - p.xi * full.w[i];
            ez = std::max(ez, std::abs(combo - reduced.z[i]));
            eu = std::max(eu, std::abs(full.u[i] - reduced.u[i]));
            zs = std::max(zs, std::abs(combo));
        }
        series.t.push_back(t);
        series.e_z.push_back(ez);
        series.e_u.push_back(eu);
        series.max_e_z = std::max(series.max_e_z, ez);
        series.max_e_u = std::max(series.max_e_u, eu);
        series.z_scale = std::max(series.z_scale, zs);
        ++series.steps;
    }
    return series;
}

} // namespace chemoblow
