// Acceptance suite: one labelled pass/fail line per criterion, nonzero
// exit when anything fails. Each check pins its tolerance in code.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chemoblow/analysis.hpp"
#include "chemoblow/commands.hpp"
#include "chemoblow/config.hpp"
#include "chemoblow/energy.hpp"
#include "chemoblow/initial_data.hpp"
#include "chemoblow/operators.hpp"

using namespace chemoblow;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const char* label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %-22s %s\n", pass ? "PASS" : "FAIL", id, label,
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

RadialField smooth(const RadialGrid& g, double base, double a1, double a2) {
    return make_field(g, [=](double r) {
        return base + a1 * std::cos(pi * r / g.radius) +
               a2 * std::cos(2.0 * pi * r / g.radius);
    });
}

// --- 1: mass conservation over a full run -------------------------------

void criterion_conservation() {
    const RadialGrid g = build_grid(1.0, 3, 256);
    const Params p{2.0, 1.0};
    FullState s{make_bump(1.0, 0.25, g), constant_field(g, 0.2), constant_field(g, 0.1), 0.0};
    const StepControl ctl{.dt_init = 1e-4, .dt_min = 1e-12, .dt_max = 5e-3,
                          .cfl = 0.5, .t_end = 1.0, .u_max_cap = 1e12};
    const IntegrationResult res = integrate(s, p, g, ctl);
    const double drift = std::abs(res.mass_final - res.mass_initial) / res.mass_initial;
    const bool reached = res.reason == TerminationReason::reached_t_end;
    report(1, "mass conservation", reached && drift <= 1e-10,
           fmt("drift %.3e (tol 1e-10), %s after %ld steps", drift, to_string(res.reason),
               res.accepted));
}

// --- 2: operator convergence ---------------------------------------------

double laplacian_error(int N) {
    const RadialGrid g = build_grid(1.0, 3, N);
    const double k = pi / g.radius;
    const RadialField f = make_field(g, [&](double r) { return std::cos(k * r); });
    const RadialField lap = laplacian(f, g);
    double err = 0.0;
    for (int i = 0; i < g.cells; ++i) {
        const double r = g.r[i];
        const double exact = -k * k * std::cos(k * r) - 2.0 * k * std::sin(k * r) / r;
        err = std::max(err, std::abs(lap[i] - exact));
    }
    return err;
}

double chemo_div_error(int N) {
    const RadialGrid g = build_grid(1.0, 3, N);
    const double k = pi / g.radius;
    const RadialField u = make_field(g, [&](double r) { return 2.0 + std::cos(k * r); });
    const RadialField sf = make_field(g, [&](double r) { return std::cos(k * r); });
    const RadialField div = chemo_div(u, sf, g);
    double err = 0.0;
    for (int i = 0; i < g.cells; ++i) {
        const double r = g.r[i];
        const double lap_s = -k * k * std::cos(k * r) - 2.0 * k * std::sin(k * r) / r;
        const double exact = (2.0 + std::cos(k * r)) * lap_s + k * k * std::sin(k * r) * std::sin(k * r);
        err = std::max(err, std::abs(div[i] - exact));
    }
    return err;
}

void criterion_operator_convergence() {
    const double l1 = laplacian_error(64), l2 = laplacian_error(128), l3 = laplacian_error(256);
    const double lap_order = std::min(std::log2(l1 / l2), std::log2(l2 / l3));
    const double c1 = chemo_div_error(128), c2 = chemo_div_error(256), c3 = chemo_div_error(512);
    const double div_order = std::min(std::log2(c1 / c2), std::log2(c2 / c3));
    report(2, "operator convergence", lap_order >= 1.9 && div_order >= 0.9,
           fmt("laplacian order %.3f (>= 1.9), upwind order %.3f (>= 0.9)", lap_order,
               div_order));
}

// --- 3: reduction equivalence --------------------------------------------

void criterion_reduction_equivalence() {
    const RadialGrid g = build_grid(1.0, 3, 128);
    const Params p{2.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    const FullState full{smooth(g, 1.0, 0.3, 0.0), smooth(g, 1.0, 0.3, 0.0),
                         smooth(g, 0.8, 0.0, 0.2), 0.0};
    const ReducedState red{full.u, lin_comb(p.chi, full.v, -p.xi, full.w), 0.0};

    const std::vector<double> dts{1e-3, 5e-4, 2.5e-4};
    std::vector<double> errs;
    double z_scale = 0.0;
    for (double dt : dts) {
        const EquivalenceSeries s = lockstep_compare(full, red, p, g, 0.25, dt);
        errs.push_back(s.max_e_z);
        z_scale = std::max(z_scale, s.z_scale);
    }
    const double floor = 1e-10 * std::max(1.0, z_scale);
    double min_order = std::numeric_limits<double>::infinity();
    bool measurable = true;
    for (std::size_t i = 1; i < errs.size(); ++i) {
        if (errs[i - 1] <= 0.0 || errs[i] <= 0.0) {
            measurable = false;
            continue;
        }
        min_order = std::min(min_order, std::log2(errs[i - 1] / errs[i]));
    }
    const double max_e = *std::max_element(errs.begin(), errs.end());
    // the discrete full and reduced flows are exactly conjugate for
    // beta == delta, so the deviation sits at round-off; below the floor
    // the refinement order carries no information
    const bool generic_ok = max_e <= floor || (measurable && min_order >= 0.9);

    // symmetry case: v0 = w0, chi = 2, xi = 1 makes z identically v
    FullState sym{smooth(g, 1.0, 0.4, 0.0), smooth(g, 1.2, 0.25, 0.0), RadialField{}, 0.0};
    sym.w = sym.v;
    const ReducedState sym_red{sym.u, lin_comb(p.chi, sym.v, -p.xi, sym.w), 0.0};
    const EquivalenceSeries sym_series = lockstep_compare(sym, sym_red, p, g, 0.25, 5e-4);
    const bool sym_ok = sym_series.max_e_z <= 1e-12;

    report(3, "reduction equivalence", generic_ok && sym_ok,
           fmt("max |chi v - xi w - z| = %.2e (round-off floor %.2e), symmetry case %.2e (<= 1e-12)",
               max_e, floor, sym_series.max_e_z));
}

// --- 4: energy identity ----------------------------------------------------

void criterion_energy_identity() {
    const RadialGrid g = build_grid(1.0, 3, 96);
    const Params p{2.0, 1.0};
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> dist(0.1, 3.0);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        RadialField u(g.cells), v(g.cells), w(g.cells);
        for (int i = 0; i < g.cells; ++i) {
            u[i] = dist(rng);
            v[i] = dist(rng);
            w[i] = dist(rng);
        }
        const double f = energy_F(u, lin_comb(p.chi, v, -p.xi, w), p, g);
        const double gg = energy_G(u, v, w, p, g);
        worst = std::max(worst, std::abs(f - gg) / std::max(std::abs(f), 1e-300));
    }
    report(4, "energy identity F == G", worst <= 1e-14,
           fmt("max relative gap %.2e over 100 random triples (tol 1e-14)", worst));
}

// --- 5: dissipation structure ----------------------------------------------

double max_residual_at(double dt) {
    const RadialGrid g = build_grid(1.0, 3, 128);
    const Params p{2.0, 1.0};
    FullState s{smooth(g, 1.0, 0.5, 0.0), smooth(g, 2.0, 1.0, 0.0), constant_field(g, 0.5), 0.0};
    const StepControl ctl{.dt_init = dt, .dt_min = 0.999 * dt, .dt_max = dt,
                          .cfl = 1.0, .t_end = 0.1, .u_max_cap = 1e12};
    std::vector<EnergyRecord> ledger;
    std::vector<FullObserver> obs{ledger_observer(ledger, p, g)};
    const IntegrationResult res = integrate(s, p, g, ctl, obs);
    if (res.reason != TerminationReason::reached_t_end) return -1.0;
    return check_energy_inequality(ledger, 0.0).max_residual;
}

void criterion_dissipation() {
    const RadialGrid g = build_grid(1.0, 3, 128);
    const Params p{2.0, 1.0};

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> du(0.05, 3.0), dz(-1.0, 1.0);
    bool nonneg = true;
    for (int rep = 0; rep < 100; ++rep) {
        RadialField u(g.cells), z(g.cells);
        for (int i = 0; i < g.cells; ++i) {
            u[i] = du(rng);
            z[i] = dz(rng);
        }
        if (dissipation_D(u, z, p, g) < 0.0) nonneg = false;
    }

    // constant steady state: zero dissipation and zero per-step residual
    const double ubar = 1.3;
    const RadialField us = constant_field(g, ubar);
    const RadialField zs = constant_field(g, (p.chi - p.xi) * ubar);
    const double d_steady = dissipation_D(us, zs, p, g);
    FullState steady{us, constant_field(g, ubar), constant_field(g, ubar), 0.0};
    const StepControl ctl{.dt_init = 1e-3, .dt_min = 1e-12, .dt_max = 1e-3,
                          .cfl = 1.0, .t_end = 0.05, .u_max_cap = 1e12};
    std::vector<EnergyRecord> ledger;
    std::vector<FullObserver> obs{ledger_observer(ledger, p, g)};
    integrate(steady, p, g, ctl, obs);
    const double steady_resid = std::abs(check_energy_inequality(ledger, 1.0).max_residual);

    const double r1 = max_residual_at(1e-3), r2 = max_residual_at(5e-4),
                 r3 = max_residual_at(2.5e-4);
    const double order =
        (r1 > 0 && r2 > 0 && r3 > 0)
            ? std::min(std::log2(r1 / r2), std::log2(r2 / r3))
            : -1.0;

    report(5, "dissipation structure",
           nonneg && d_steady == 0.0 && steady_resid <= 1e-9 && order >= 0.9,
           fmt("D >= 0 on 100 states: %s; steady D = %.1e, residual %.1e (<= 1e-9); "
               "residual order %.3f (>= 0.9)",
               nonneg ? "yes" : "no", d_steady, steady_resid, order));
}

// --- 6: ODE bound machinery -------------------------------------------------

void criterion_ode_bound() {
    const double theta = theta_of(3);
    const bool theta_exact = theta == 5.0 / 7.0;

    const double y0 = 0.8, c2 = 0.45;
    const double t_star = blowup_time_bound(y0, c2, theta);
    double worst_fd = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double t = (0.04 + 0.9 * k / 20.0) * t_star;
        const double fd = 1e-6 * t_star;
        const double slope =
            (ode_lower_bound(y0, c2, theta, t + fd) - ode_lower_bound(y0, c2, theta, t - fd)) /
            (2.0 * fd);
        const double want = c2 * std::pow(ode_lower_bound(y0, c2, theta, t), 1.0 / theta);
        worst_fd = std::max(worst_fd, std::abs(slope - want) / want);
    }

    std::vector<EnergyRecord> ledger;
    const double dt = 1e-3;
    for (double t = 0.0; t <= 7.0; t += dt)
        ledger.push_back(EnergyRecord{t, -ode_lower_bound(1.0, 0.3, theta, t), 0.0, 1.0, 1.0,
                                      ledger.empty() ? 0.0 : dt});
    const auto fit = fit_c2(ledger, theta);
    const double fit_rel = fit ? std::abs(*fit - 0.3) / 0.3 : 1.0;

    report(6, "ODE lower bound", theta_exact && worst_fd <= 1e-6 && fit && fit_rel <= 0.02,
           fmt("theta(3) exact: %s; FD defect %.2e (<= 1e-6); c2 fit %.4f (within 2%% of 0.3)",
               theta_exact ? "yes" : "no", worst_fd, fit ? *fit : 0.0));
}

// --- 7: blow-up demonstration ------------------------------------------------

void criterion_blowup() {
    const RadialGrid g = build_grid(1.0, 3, 512);
    const Params p{2.0, 1.0};
    DriveOptions opt;
    opt.m = 30.0;
    opt.A = 60.0;
    opt.K = 10.0;
    opt.eps = 50.0;
    const DriveResult d = drive_to_class(constant_field(g, opt.m / g.ball_volume()),
                                         constant_field(g, 1.0), constant_field(g, 1.0), p, g,
                                         opt);
    if (!d.success) {
        report(7, "finite-time blow-up", false, "drive_to_class failed: " + d.message);
        return;
    }

    FullState s{d.u0, d.v0, d.w0, 0.0};
    const StepControl ctl{.dt_init = 1e-6, .dt_min = 1e-9, .dt_max = 1e-3,
                          .cfl = 0.4, .t_end = 5.0, .u_max_cap = 150.0 * max_abs(d.u0)};
    std::vector<EnergyRecord> ledger;
    std::vector<FullObserver> obs{ledger_observer(ledger, p, g)};
    const IntegrationResult res = integrate(s, p, g, ctl, obs);
    const BlowupReport rep = classify(res, ledger, ctl, g.dim);

    double dt_floor = ctl.dt_max;
    for (std::size_t k = 1; k < res.dt_hist.size(); ++k)
        dt_floor = std::min(dt_floor, res.dt_hist[k]);

    const bool blew = rep.verdict == Verdict::blew_up && rep.t_last < ctl.t_end &&
                      rep.growth >= 100.0;
    const bool bound_ok =
        rep.t_star_estimate.has_value() && *rep.t_star_estimate >= rep.t_last;

    // companion run: same chi, xi, gentle data, must complete
    const RadialGrid gc = build_grid(1.0, 3, 256);
    FullState sub{make_bump(1.0, 0.3, gc), constant_field(gc, 0.2), constant_field(gc, 0.1), 0.0};
    const StepControl cs{.dt_init = 1e-4, .dt_min = 1e-12, .dt_max = 1e-2,
                         .cfl = 0.5, .t_end = 5.0, .u_max_cap = 1e12};
    const IntegrationResult comp = integrate(sub, p, gc, cs);
    const bool companion_ok = comp.reason == TerminationReason::reached_t_end;

    report(7, "finite-time blow-up", blew && bound_ok && companion_ok,
           fmt("G(0) = %.2f <= -%.0f; %s at t = %.3e with growth %.0fx, dt fell to %.1e; "
               "T* = %.3e >= t_last: %s; subcritical companion %s",
               d.g_value, opt.K, to_string(rep.verdict), rep.t_last, rep.growth, dt_floor,
               rep.t_star_estimate.value_or(-1.0), bound_ok ? "yes" : "no",
               to_string(comp.reason)));
}

// --- 8: membership checker is single-fault strict ---------------------------

void criterion_membership() {
    const RadialGrid g = build_grid(1.0, 3, 512);
    const Params p{2.0, 1.0};
    DriveOptions opt;
    opt.m = 30.0;
    opt.A = 60.0;
    opt.K = 10.0;
    opt.eps = 50.0;
    const DriveResult d = drive_to_class(constant_field(g, opt.m / g.ball_volume()),
                                         constant_field(g, 1.0), constant_field(g, 1.0), p, g,
                                         opt);
    if (!d.success) {
        report(8, "membership strictness", false, "drive_to_class failed: " + d.message);
        return;
    }
    const MembershipReport base =
        check_membership(d.u0, d.v0, d.w0, p, g, opt.m, opt.A, opt.K);

    RadialField u_scaled = d.u0;
    for (double& x : u_scaled.values) x *= 1.0 + 1e-6;
    RadialField u_neg = d.u0;
    u_neg[11] = -u_neg[11];
    RadialField w_big = d.w0;
    w_big[g.cells - 1] += 1e3;

    const bool toggles_fail =
        !check_membership(u_scaled, d.v0, d.w0, p, g, opt.m, opt.A, opt.K).satisfies &&
        !check_membership(d.u0, d.v0, d.w0, p, g, opt.m, 0.99 * base.a_norm, opt.K).satisfies &&
        !check_membership(d.u0, d.v0, d.w0, p, g, opt.m, opt.A, -base.g_value + 1.0).satisfies &&
        !check_membership(u_neg, d.v0, d.w0, p, g, opt.m, opt.A, opt.K).satisfies &&
        !check_membership(d.u0, d.v0, w_big, p, g, opt.m, opt.A, opt.K).satisfies;

    report(8, "membership strictness", base.satisfies && toggles_fail,
           fmt("certified data accepted: %s; all 5 single-fault toggles rejected: %s",
               base.satisfies ? "yes" : "no", toggles_fail ? "yes" : "no"));
}

// --- 9: determinism -----------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism() {
    const fs::path tmp = fs::temp_directory_path() / "chemoblow_acceptance_det";
    fs::remove_all(tmp);
    RunConfig cfg = preset_config("steady");
    cfg.grid.N = 64;
    cfg.control.t_end = 0.05;
    cfg.output_dir = (tmp / "out").string();
    const int rc1 = cmd_run(cfg);
    const std::string first = slurp(tmp / "out" / "ledger.csv");
    const int rc2 = cmd_run(cfg);
    const std::string second = slurp(tmp / "out" / "ledger.csv");
    fs::remove_all(tmp);
    report(9, "determinism", rc1 == 0 && rc2 == 0 && !first.empty() && first == second,
           fmt("two runs, ledger.csv identical: %s (%zu bytes)",
               first == second ? "yes" : "no", first.size()));
}

} // namespace

int main() {
    criterion_conservation();
    criterion_operator_convergence();
    criterion_reduction_equivalence();
    criterion_energy_identity();
    criterion_dissipation();
    criterion_ode_bound();
    criterion_blowup();
    criterion_membership();
    criterion_determinism();
    if (failures == 0) {
        std::printf("all 9 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", failures);
    return 1;
}
