#include "chemoblow/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "chemoblow/analysis.hpp"
#include "chemoblow/energy.hpp"
#include "chemoblow/errors.hpp"
#include "chemoblow/initial_data.hpp"
#include "chemoblow/log.hpp"
#include "chemoblow/operators.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef CHEMOBLOW_REVISION
#define CHEMOBLOW_REVISION "unknown"
#endif

namespace chemoblow {

const char* version_stamp() {
    return "chemoblow 0.1.0 (" CHEMOBLOW_REVISION ")";
}

namespace {

std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// All artifacts are written whole through a temp file and a rename.
void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

RadialField load_field_csv(const std::string& path, const RadialGrid& g) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config.initial", "cannot open field file " + path);
    RadialField f(static_cast<std::size_t>(g.cells));
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double r = 0.0, value = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &r, &value) != 2) {
            if (i == 0) continue;  // header line
            throw ConfigError("config.initial", "bad row in field file " + path + ": " + line);
        }
        if (i >= f.size())
            throw ConfigError("config.initial", "field file " + path + " has too many rows");
        if (std::abs(r - g.r[i]) > 0.25 * g.h)
            throw ConfigError("config.initial",
                              "field file " + path + " was written for a different grid");
        f[i++] = value;
    }
    if (i != f.size())
        throw ConfigError("config.initial", "field file " + path + " has too few rows");
    return f;
}

std::string field_csv(const RadialField& f, const RadialGrid& g) {
    std::string out = "r,value\n";
    for (int i = 0; i < g.cells; ++i)
        out += fmt_g17(g.r[i]) + "," + fmt_g17(f[i]) + "\n";
    return out;
}

json membership_to_json(const MembershipReport& rep) {
    json j;
    j["mass"] = rep.mass;
    j["a_norm"] = rep.a_norm;
    j["g_value"] = rep.g_value;  // NaN serializes as null
    j["positivity_u"] = rep.positivity_u;
    j["positivity_z"] = rep.positivity_z;
    j["satisfies"] = rep.satisfies;
    j["thresholds"] = {{"m", rep.m}, {"A", rep.A}, {"K", rep.K}};
    return j;
}

json thinned(const std::vector<double>& v, std::size_t cap = 512) {
    json arr = json::array();
    const std::size_t stride = v.size() > cap ? (v.size() + cap - 1) / cap : 1;
    for (std::size_t i = 0; i < v.size(); i += stride) arr.push_back(v[i]);
    if (!v.empty() && (v.size() - 1) % stride != 0) arr.push_back(v.back());
    return arr;
}

json blowup_to_json(const BlowupReport& rep) {
    json j;
    j["verdict"] = to_string(rep.verdict);
    j["termination"] = to_string(rep.reason);
    j["t_last"] = rep.t_last;
    j["u_max_initial"] = rep.u_max_initial;
    j["u_max_peak"] = rep.u_max_peak;
    j["growth"] = rep.growth;
    j["theta"] = rep.theta;
    j["c2_fit"] = rep.c2_fit ? json(*rep.c2_fit) : json(nullptr);
    j["t_star_estimate"] = rep.t_star_estimate ? json(*rep.t_star_estimate) : json(nullptr);
    j["t_history"] = thinned(rep.t_history);
    j["u_max_history"] = thinned(rep.u_max_history);
    j["dt_history"] = thinned(rep.dt_history);
    return j;
}

std::string ledger_csv(const std::vector<EnergyRecord>& ledger) {
    std::string out = "t,F,D,mass,u_max,dt\n";
    for (const EnergyRecord& r : ledger) {
        out += fmt_g17(r.t) + "," + fmt_g17(r.F) + "," + fmt_g17(r.D) + "," + fmt_g17(r.mass) +
               "," + fmt_g17(r.u_max) + "," + fmt_g17(r.dt) + "\n";
    }
    return out;
}

StepControl resolve_cap(StepControl ctl, double u_max0) {
    if (ctl.u_max_cap == 0.0)
        ctl.u_max_cap =
            u_max0 > 0.0 ? 1e6 * u_max0 : std::numeric_limits<double>::infinity();
    return ctl;
}

// Writes numbered r,u,v,w (or r,u,z) snapshots; the final accepted state
// is always flushed even when it misses the cadence.
class SnapshotWriter {
public:
    SnapshotWriter(fs::path dir, int every, const RadialGrid& g)
        : dir_(std::move(dir)), every_(every), grid_(g) {}

    void full(const FullState& s, long step) {
        if (!due(step)) return;
        write(header_full(), [&](std::string& out, int i) {
            out += fmt_g17(grid_.r[i]) + "," + fmt_g17(s.u[i]) + "," + fmt_g17(s.v[i]) + "," +
                   fmt_g17(s.w[i]) + "\n";
        });
        last_step_ = step;
    }

    void reduced(const ReducedState& s, long step) {
        if (!due(step)) return;
        write(header_reduced(), [&](std::string& out, int i) {
            out += fmt_g17(grid_.r[i]) + "," + fmt_g17(s.u[i]) + "," + fmt_g17(s.z[i]) + "\n";
        });
        last_step_ = step;
    }

    void finish_full(const FullState& s, long step) {
        if (step != last_step_) {
            last_step_ = -1;  // force
            full(s, 0);
        }
    }

    void finish_reduced(const ReducedState& s, long step) {
        if (step != last_step_) {
            last_step_ = -1;
            reduced(s, 0);
        }
    }

private:
    bool due(long step) const {
        if (step == 0 && last_step_ < 0) return true;
        return every_ > 0 && step > 0 && step % every_ == 0;
    }
    static const char* header_full() { return "r,u,v,w\n"; }
    static const char* header_reduced() { return "r,u,z\n"; }

    template <class Row>
    void write(const char* header, Row&& row) {
        std::string out = header;
        for (int i = 0; i < grid_.cells; ++i) row(out, i);
        char name[32];
        std::snprintf(name, sizeof name, "%04d.csv", counter_++);
        write_file_atomic(dir_ / name, out);
    }

    fs::path dir_;
    int every_;
    const RadialGrid& grid_;
    int counter_ = 0;
    long last_step_ = -1;
};

struct RunOutput {
    IntegrationResult traj;
    std::vector<EnergyRecord> ledger;
    BlowupReport report;
};

RunOutput execute_run(const RunConfig& cfg, const RadialGrid& g, const FullState& init,
                      SnapshotWriter* snaps) {
    RunOutput out;
    const StepControl ctl = resolve_cap(cfg.control, max_abs(init.u));

    if (cfg.mode == RunMode::reduced) {
        ReducedState s{init.u, lin_comb(cfg.params.chi, init.v, -cfg.params.xi, init.w), 0.0};
        std::vector<ReducedObserver> obs{ledger_observer_reduced(out.ledger, cfg.params, g)};
        if (snaps != nullptr)
            obs.push_back([snaps](const ReducedState& st, const StepInfo& info) {
                snaps->reduced(st, info.step);
            });
        out.traj = integrate(s, cfg.params, g, ctl, obs);
        if (snaps != nullptr) snaps->finish_reduced(s, out.traj.accepted);
    } else {
        FullState s = init;
        std::vector<FullObserver> obs{ledger_observer(out.ledger, cfg.params, g)};
        if (snaps != nullptr)
            obs.push_back(
                [snaps](const FullState& st, const StepInfo& info) { snaps->full(st, info.step); });
        out.traj = integrate(s, cfg.params, g, ctl, obs);
        if (snaps != nullptr) snaps->finish_full(s, out.traj.accepted);
    }
    out.report = classify(out.traj, out.ledger, ctl, g.dim);
    return out;
}

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::completed: return 0;
        case Verdict::blew_up: return 2;
        case Verdict::inconclusive: return 1;
    }
    return 1;
}

} // namespace

RadialField build_field(const FieldSpec& spec, const RadialGrid& g) {
    switch (spec.kind) {
        case FieldKind::constant: return constant_field(g, spec.value);
        case FieldKind::bump: return make_bump(spec.mass, spec.sigma, g);
        case FieldKind::spike:
            return make_spike(spec.base, spec.amplitude, spec.kappa, spec.sigma, g);
        case FieldKind::file: return load_field_csv(spec.path, g);
    }
    throw std::logic_error("build_field: unreachable");
}

FullState build_initial(const RunConfig& cfg, const RadialGrid& g) {
    return FullState{build_field(cfg.initial_u, g), build_field(cfg.initial_v, g),
                     build_field(cfg.initial_w, g), 0.0};
}

int cmd_run(const RunConfig& cfg) {
    validate(cfg);
    if (cfg.mode == RunMode::compare)
        throw ConfigError("config.mode", "mode compare belongs to the compare command");

    const RadialGrid g = build_grid(cfg.grid.R, cfg.grid.n, cfg.grid.N);
    const FullState init = build_initial(cfg, g);

    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    SnapshotWriter snaps(out_dir / "snapshots", cfg.snapshot_every, g);

    RunOutput run = execute_run(cfg, g, init, &snaps);

    write_file_atomic(out_dir / "ledger.csv", ledger_csv(run.ledger));

    json report;
    report["version"] = version_stamp();
    report["config"] = json::parse(config_to_json_text(cfg));
    report["blowup"] = blowup_to_json(run.report);
    if (cfg.params.chi > cfg.params.xi) {
        report["membership"] =
            membership_to_json(check_membership(init.u, init.v, init.w, cfg.params, g,
                                                cfg.thresholds.m, cfg.thresholds.A,
                                                cfg.thresholds.K));
    } else {
        report["membership"] = nullptr;
    }
    report["mass_initial"] = run.traj.mass_initial;
    report["mass_final"] = run.traj.mass_final;
    report["mass_drift_rel"] =
        run.traj.mass_initial != 0.0
            ? std::abs(run.traj.mass_final - run.traj.mass_initial) / run.traj.mass_initial
            : 0.0;
    report["accepted_steps"] = run.traj.accepted;
    report["rejected_steps"] = run.traj.rejected;
    write_file_atomic(out_dir / "report.json", report.dump(2) + "\n");

    std::printf("%s at t = %.6g after %ld steps (%ld rejected) -> %s\n",
                to_string(run.report.verdict), run.report.t_last, run.traj.accepted,
                run.traj.rejected, (out_dir / "report.json").c_str());
    return exit_code(run.report.verdict);
}

int cmd_compare(const RunConfig& cfg) {
    validate(cfg);
    if (cfg.params.beta != cfg.params.delta)
        throw ConfigError("config.params",
                          "compare needs beta == delta: the system does not reduce otherwise");
    if (cfg.compare.dts.size() < 2)
        throw ConfigError("config.compare.dts", "need at least two step sizes");

    const RadialGrid g = build_grid(cfg.grid.R, cfg.grid.n, cfg.grid.N);
    const FullState init = build_initial(cfg, g);
    const ReducedState init_red{init.u,
                                lin_comb(cfg.params.chi, init.v, -cfg.params.xi, init.w), 0.0};

    std::vector<EquivalenceSeries> runs;
    for (double dt : cfg.compare.dts)
        runs.push_back(lockstep_compare(init, init_red, cfg.params, g, cfg.control.t_end, dt));

    double z_scale = 0.0, max_e = 0.0;
    for (const auto& r : runs) {
        z_scale = std::max(z_scale, r.z_scale);
        max_e = std::max(max_e, r.max_e_z);
    }
    const double floor = 1e-10 * std::max(1.0, z_scale);

    std::string refinement = "dt,max_e_z,max_e_u,order\n";
    double min_order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string order_s;
        if (i > 0 && runs[i - 1].max_e_z > 0.0 && runs[i].max_e_z > 0.0) {
            const double order = std::log(runs[i - 1].max_e_z / runs[i].max_e_z) /
                                 std::log(cfg.compare.dts[i - 1] / cfg.compare.dts[i]);
            min_order = std::min(min_order, order);
            order_s = fmt_g17(order);
        }
        refinement += fmt_g17(cfg.compare.dts[i]) + "," + fmt_g17(runs[i].max_e_z) + "," +
                      fmt_g17(runs[i].max_e_u) + "," + order_s + "\n";
    }

    const bool at_round_off = max_e <= floor;
    const bool pass = at_round_off || min_order >= 0.9;

    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    const EquivalenceSeries& finest = runs.back();
    std::string equivalence = "t,e_z,e_u\n";
    for (std::size_t k = 0; k < finest.t.size(); ++k)
        equivalence += fmt_g17(finest.t[k]) + "," + fmt_g17(finest.e_z[k]) + "," +
                       fmt_g17(finest.e_u[k]) + "\n";
    write_file_atomic(out_dir / "equivalence.csv", equivalence);
    write_file_atomic(out_dir / "refinement.csv", refinement);

    std::printf("%s", refinement.c_str());
    std::printf("max deviation %.3e (round-off floor %.3e): %s\n", max_e, floor,
                pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}

int cmd_membership(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    if (!(cfg.params.chi > cfg.params.xi))
        throw ConfigError("config.params", "membership needs chi > xi");

    const RadialGrid g = build_grid(cfg.grid.R, cfg.grid.n, cfg.grid.N);
    const FullState init = build_initial(cfg, g);
    const MembershipReport rep = check_membership(init.u, init.v, init.w, cfg.params, g,
                                                  cfg.thresholds.m, cfg.thresholds.A,
                                                  cfg.thresholds.K);
    out << membership_to_json(rep).dump(2) << "\n";
    return rep.satisfies ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, int workers) {
    validate(cfg);

    struct Row {
        double chi, xi, sigma, mass;
    };
    std::vector<Row> rows;
    for (double chi : cfg.sweep.chi)
        for (double xi : cfg.sweep.xi)
            for (double sigma : cfg.sweep.sigma)
                for (double mass : cfg.sweep.mass) rows.push_back(Row{chi, xi, sigma, mass});

    const RadialGrid g = build_grid(cfg.grid.R, cfg.grid.n, cfg.grid.N);
    std::vector<std::string> lines(rows.size());

    auto run_row = [&](std::size_t idx) {
        const Row& row = rows[idx];
        std::string verdict = "Inconclusive";
        std::string t_last_s, g0_s, c2_s;
        try {
            if (!(row.chi > row.xi)) {
                verdict = "Invalid";
            } else {
                RunConfig rc = cfg;
                rc.params.chi = row.chi;
                rc.params.xi = row.xi;
                rc.initial_u = FieldSpec::bump(row.sigma, row.mass);
                const FullState init = build_initial(rc, g);
                RunOutput out = execute_run(rc, g, init, nullptr);
                verdict = to_string(out.report.verdict);
                t_last_s = fmt_g17(out.report.t_last);
                if (!out.ledger.empty()) g0_s = fmt_g17(out.ledger.front().F);
                if (out.report.c2_fit) c2_s = fmt_g17(*out.report.c2_fit);
            }
        } catch (const std::exception& e) {
            CB_LOG_INFO("sweep row %zu failed: %s", idx, e.what());
            verdict = "Inconclusive";
        }
        lines[idx] = fmt_g17(row.chi) + "," + fmt_g17(row.xi) + "," + fmt_g17(row.sigma) + "," +
                     fmt_g17(row.mass) + "," + verdict + "," + t_last_s + "," + g0_s + "," + c2_s;
    };

    const int n_workers =
        std::max(1, std::min<int>(workers, static_cast<int>(rows.empty() ? 1 : rows.size())));
    if (n_workers <= 1 || rows.size() <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) run_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < n_workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1))
                    run_row(i);
            });
        for (auto& th : pool) th.join();
    }

    std::string out = "chi,xi,sigma,mass,verdict,t_last,G0,c2\n";
    for (const auto& line : lines) out += line + "\n";
    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    write_file_atomic(out_dir / "phase.csv", out);
    return 0;
}

int cmd_drive(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    if (!(cfg.params.chi > cfg.params.xi))
        throw ConfigError("config.params", "drive needs chi > xi");

    const RadialGrid g = build_grid(cfg.grid.R, cfg.grid.n, cfg.grid.N);
    const FullState init = build_initial(cfg, g);

    DriveOptions opt;
    opt.m = cfg.thresholds.m;
    opt.A = cfg.thresholds.A;
    opt.K = cfg.thresholds.K;
    opt.eps = cfg.thresholds.eps;
    opt.p = cfg.thresholds.p;
    opt.sharpen_v = cfg.drive.sharpen_v;
    opt.lambda_cap = cfg.drive.lambda_cap;
    opt.sigma0 = cfg.drive.sigma0;

    const DriveResult res = drive_to_class(init.u, init.v, init.w, cfg.params, g, opt);

    json j;
    j["success"] = res.success;
    j["sigma"] = res.sigma;
    j["lambda"] = res.lambda;
    j["mu"] = res.mu;
    j["g_value"] = res.g_value;
    j["distance"] = res.distance;
    j["message"] = res.message;
    j["report"] = membership_to_json(res.report);

    if (res.success) {
        const fs::path out_dir(cfg.output_dir);
        fs::create_directories(out_dir);
        write_file_atomic(out_dir / "u0.csv", field_csv(res.u0, g));
        write_file_atomic(out_dir / "v0.csv", field_csv(res.v0, g));
        write_file_atomic(out_dir / "w0.csv", field_csv(res.w0, g));
    }
    out << j.dump(2) << "\n";
    return res.success ? 0 : 1;
}

} // namespace chemoblow
