#include "chemoblow/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "chemoblow/errors.hpp"

namespace chemoblow {

namespace {

using nlohmann::json;

// Object reader that tracks consumed keys and rejects the rest, so typos
// fail with the exact dotted path.
class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    }

    const json* find(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    double num(const char* key, double dflt) {
        const json* v = find(key);
        if (v == nullptr) return dflt;
        if (!v->is_number()) throw ConfigError(path_ + "." + key, "expected a number");
        return v->get<double>();
    }

    long integer(const char* key, long dflt) {
        const json* v = find(key);
        if (v == nullptr) return dflt;
        if (!v->is_number_integer()) throw ConfigError(path_ + "." + key, "expected an integer");
        return v->get<long>();
    }

    bool boolean(const char* key, bool dflt) {
        const json* v = find(key);
        if (v == nullptr) return dflt;
        if (!v->is_boolean()) throw ConfigError(path_ + "." + key, "expected a boolean");
        return v->get<bool>();
    }

    std::string str(const char* key, const std::string& dflt) {
        const json* v = find(key);
        if (v == nullptr) return dflt;
        if (!v->is_string()) throw ConfigError(path_ + "." + key, "expected a string");
        return v->get<std::string>();
    }

    std::vector<double> num_list(const char* key, std::vector<double> dflt) {
        const json* v = find(key);
        if (v == nullptr) return dflt;
        if (!v->is_array()) throw ConfigError(path_ + "." + key, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : *v) {
            if (!e.is_number()) throw ConfigError(path_ + "." + key, "expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    const json* object(const char* key) {
        const json* v = find(key);
        if (v != nullptr && !v->is_object())
            throw ConfigError(path_ + "." + key, "expected an object");
        return v;
    }

    void finish() {
        for (const auto& item : j_.items())
            if (seen_.count(item.key()) == 0)
                throw ConfigError(path_ + "." + item.key(), "unknown key");
    }

    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

FieldSpec field_from_json(const json& j, const std::string& path) {
    Obj o(j, path);
    FieldSpec f;
    const std::string type = o.str("type", "constant");
    if (type == "constant") {
        f.kind = FieldKind::constant;
        f.value = o.num("value", 0.0);
    } else if (type == "bump") {
        f.kind = FieldKind::bump;
        f.sigma = o.num("sigma", 0.1);
        f.mass = o.num("mass", 1.0);
    } else if (type == "spike") {
        f.kind = FieldKind::spike;
        f.base = o.num("base", 0.0);
        f.amplitude = o.num("amplitude", 1.0);
        f.kappa = o.num("kappa", 0.4);
        f.sigma = o.num("sigma", 0.1);
    } else if (type == "file") {
        f.kind = FieldKind::file;
        f.path = o.str("path", "");
        if (f.path.empty()) throw ConfigError(path + ".path", "file field needs a path");
    } else {
        throw ConfigError(path + ".type", "expected constant, bump, spike, or file");
    }
    o.finish();
    return f;
}

json field_to_json(const FieldSpec& f) {
    json j;
    switch (f.kind) {
        case FieldKind::constant:
            j["type"] = "constant";
            j["value"] = f.value;
            break;
        case FieldKind::bump:
            j["type"] = "bump";
            j["sigma"] = f.sigma;
            j["mass"] = f.mass;
            break;
        case FieldKind::spike:
            j["type"] = "spike";
            j["base"] = f.base;
            j["amplitude"] = f.amplitude;
            j["kappa"] = f.kappa;
            j["sigma"] = f.sigma;
            break;
        case FieldKind::file:
            j["type"] = "file";
            j["path"] = f.path;
            break;
    }
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    Obj root(j, "config");

    const std::string mode = root.str("mode", "full");
    if (mode == "full") c.mode = RunMode::full;
    else if (mode == "reduced") c.mode = RunMode::reduced;
    else if (mode == "compare") c.mode = RunMode::compare;
    else throw ConfigError("config.mode", "expected full, reduced, or compare");

    if (const json* v = root.object("params")) {
        Obj o(*v, "config.params");
        c.params.chi = o.num("chi", c.params.chi);
        c.params.xi = o.num("xi", c.params.xi);
        c.params.alpha = o.num("alpha", c.params.alpha);
        c.params.beta = o.num("beta", c.params.beta);
        c.params.gamma = o.num("gamma", c.params.gamma);
        c.params.delta = o.num("delta", c.params.delta);
        o.finish();
    }
    if (const json* v = root.object("grid")) {
        Obj o(*v, "config.grid");
        c.grid.R = o.num("R", c.grid.R);
        c.grid.n = static_cast<int>(o.integer("n", c.grid.n));
        c.grid.N = static_cast<int>(o.integer("N", c.grid.N));
        o.finish();
    }
    if (const json* v = root.object("control")) {
        Obj o(*v, "config.control");
        c.control.dt_init = o.num("dt_init", c.control.dt_init);
        c.control.dt_min = o.num("dt_min", c.control.dt_min);
        c.control.dt_max = o.num("dt_max", c.control.dt_max);
        c.control.cfl = o.num("cfl", c.control.cfl);
        c.control.t_end = o.num("t_end", c.control.t_end);
        c.control.u_max_cap = o.num("u_max_cap", c.control.u_max_cap);
        o.finish();
    }
    if (const json* v = root.object("initial")) {
        Obj o(*v, "config.initial");
        if (const json* f = o.object("u")) c.initial_u = field_from_json(*f, "config.initial.u");
        if (const json* f = o.object("v")) c.initial_v = field_from_json(*f, "config.initial.v");
        if (const json* f = o.object("w")) c.initial_w = field_from_json(*f, "config.initial.w");
        o.finish();
    }
    if (const json* v = root.object("thresholds")) {
        Obj o(*v, "config.thresholds");
        c.thresholds.m = o.num("m", c.thresholds.m);
        c.thresholds.A = o.num("A", c.thresholds.A);
        c.thresholds.K = o.num("K", c.thresholds.K);
        c.thresholds.eps = o.num("eps", c.thresholds.eps);
        c.thresholds.p = o.num("p", c.thresholds.p);
        o.finish();
    }
    if (const json* v = root.object("drive")) {
        Obj o(*v, "config.drive");
        c.drive.sharpen_v = o.boolean("sharpen_v", c.drive.sharpen_v);
        c.drive.lambda_cap = o.num("lambda_cap", c.drive.lambda_cap);
        c.drive.sigma0 = o.num("sigma0", c.drive.sigma0);
        o.finish();
    }
    if (const json* v = root.object("sweep")) {
        Obj o(*v, "config.sweep");
        c.sweep.chi = o.num_list("chi", {});
        c.sweep.xi = o.num_list("xi", {});
        c.sweep.sigma = o.num_list("sigma", {});
        c.sweep.mass = o.num_list("mass", {});
        o.finish();
    }
    if (const json* v = root.object("compare")) {
        Obj o(*v, "config.compare");
        c.compare.dts = o.num_list("dts", c.compare.dts);
        o.finish();
    }
    c.output_dir = root.str("output_dir", c.output_dir);
    c.snapshot_every = static_cast<int>(root.integer("snapshot_every", c.snapshot_every));
    c.seed = root.integer("seed", c.seed);
    root.finish();
    return c;
}

json config_to_json(const RunConfig& c) {
    json j;
    j["mode"] = to_string(c.mode);
    j["params"] = {{"chi", c.params.chi},     {"xi", c.params.xi},    {"alpha", c.params.alpha},
                   {"beta", c.params.beta},   {"gamma", c.params.gamma},
                   {"delta", c.params.delta}};
    j["grid"] = {{"R", c.grid.R}, {"n", c.grid.n}, {"N", c.grid.N}};
    j["control"] = {{"dt_init", c.control.dt_init}, {"dt_min", c.control.dt_min},
                    {"dt_max", c.control.dt_max},   {"cfl", c.control.cfl},
                    {"t_end", c.control.t_end},     {"u_max_cap", c.control.u_max_cap}};
    j["initial"] = {{"u", field_to_json(c.initial_u)},
                    {"v", field_to_json(c.initial_v)},
                    {"w", field_to_json(c.initial_w)}};
    j["thresholds"] = {{"m", c.thresholds.m}, {"A", c.thresholds.A},   {"K", c.thresholds.K},
                       {"eps", c.thresholds.eps}, {"p", c.thresholds.p}};
    j["drive"] = {{"sharpen_v", c.drive.sharpen_v},
                  {"lambda_cap", c.drive.lambda_cap},
                  {"sigma0", c.drive.sigma0}};
    j["sweep"] = {{"chi", c.sweep.chi}, {"xi", c.sweep.xi},
                  {"sigma", c.sweep.sigma}, {"mass", c.sweep.mass}};
    j["compare"] = {{"dts", c.compare.dts}};
    j["output_dir"] = c.output_dir;
    j["snapshot_every"] = c.snapshot_every;
    j["seed"] = c.seed;
    return j;
}

} // namespace

FieldSpec FieldSpec::constant(double value) {
    FieldSpec f;
    f.kind = FieldKind::constant;
    f.value = value;
    return f;
}

FieldSpec FieldSpec::bump(double sigma, double mass) {
    FieldSpec f;
    f.kind = FieldKind::bump;
    f.sigma = sigma;
    f.mass = mass;
    return f;
}

FieldSpec FieldSpec::spike(double base, double amplitude, double kappa, double sigma) {
    FieldSpec f;
    f.kind = FieldKind::spike;
    f.base = base;
    f.amplitude = amplitude;
    f.kappa = kappa;
    f.sigma = sigma;
    return f;
}

FieldSpec FieldSpec::file(std::string path) {
    FieldSpec f;
    f.kind = FieldKind::file;
    f.path = std::move(path);
    return f;
}

const char* to_string(RunMode m) {
    switch (m) {
        case RunMode::full: return "full";
        case RunMode::reduced: return "reduced";
        case RunMode::compare: return "compare";
    }
    return "?";
}

RunConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    return config_from_json(j);
}

std::string config_to_json_text(const RunConfig& c) {
    return config_to_json(c).dump(2) + "\n";
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

void validate(const RunConfig& c) {
    if (!(c.grid.R > 0.0)) throw ConfigError("config.grid.R", "must be positive");
    if (c.grid.n < 2) throw ConfigError("config.grid.n", "must be at least 2");
    if (c.grid.N < 8) throw ConfigError("config.grid.N", "must be at least 8");

    if (!(c.params.chi > 0.0)) throw ConfigError("config.params.chi", "must be positive");
    if (!(c.params.xi > 0.0)) throw ConfigError("config.params.xi", "must be positive");
    if (!(c.params.alpha > 0.0)) throw ConfigError("config.params.alpha", "must be positive");
    if (!(c.params.beta > 0.0)) throw ConfigError("config.params.beta", "must be positive");
    if (!(c.params.gamma > 0.0)) throw ConfigError("config.params.gamma", "must be positive");
    if (!(c.params.delta > 0.0)) throw ConfigError("config.params.delta", "must be positive");

    if (!(c.control.dt_min > 0.0 && c.control.dt_min <= c.control.dt_init &&
          c.control.dt_init <= c.control.dt_max))
        throw ConfigError("config.control", "need 0 < dt_min <= dt_init <= dt_max");
    if (!(c.control.cfl > 0.0 && c.control.cfl <= 1.0))
        throw ConfigError("config.control.cfl", "must lie in (0, 1]");
    if (!(c.control.t_end > 0.0)) throw ConfigError("config.control.t_end", "must be positive");
    if (c.control.u_max_cap < 0.0)
        throw ConfigError("config.control.u_max_cap", "must be >= 0 (0 selects the default)");

    if (c.mode == RunMode::compare && c.params.beta != c.params.delta)
        throw ConfigError("config.params",
                          "compare mode needs beta == delta: the system does not reduce otherwise");

    if (!(c.thresholds.m > 0.0)) throw ConfigError("config.thresholds.m", "must be positive");
    if (!(c.thresholds.A > 0.0)) throw ConfigError("config.thresholds.A", "must be positive");
    if (!(c.thresholds.eps >= 0.0)) throw ConfigError("config.thresholds.eps", "must be >= 0");
    if (c.grid.n >= 3) {
        const double p_hi = 2.0 * c.grid.n / (c.grid.n + 2.0);
        if (!(c.thresholds.p > 1.0 && c.thresholds.p < p_hi))
            throw ConfigError("config.thresholds.p", "must lie in (1, 2n/(n+2))");
    }

    if (c.snapshot_every < 0)
        throw ConfigError("config.snapshot_every", "must be >= 0");

    for (const auto* spec : {&c.initial_u, &c.initial_v, &c.initial_w}) {
        if (spec->kind == FieldKind::file && !std::filesystem::exists(spec->path))
            throw ConfigError("config.initial", "field file does not exist: " + spec->path);
        if (spec->kind == FieldKind::bump && !(spec->sigma > 0.0))
            throw ConfigError("config.initial", "bump sigma must be positive");
        if (spec->kind == FieldKind::bump && !(spec->mass > 0.0))
            throw ConfigError("config.initial", "bump mass must be positive");
        if (spec->kind == FieldKind::spike && !(spec->kappa > 0.0 && spec->sigma > 0.0))
            throw ConfigError("config.initial", "spike needs positive kappa and sigma");
    }

    for (double dt : c.compare.dts)
        if (!(dt > 0.0)) throw ConfigError("config.compare.dts", "entries must be positive");
}

std::vector<std::string> preset_names() {
    return {"subcritical3d", "supercritical3d", "steady"};
}

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    if (name == "steady") {
        // Exact constant steady state: u = 1, v = alpha/beta, w = gamma/delta.
        c.mode = RunMode::full;
        c.params = Params{2.0, 1.0, 1.0, 1.0, 1.0, 1.0};
        c.grid = GridConfig{1.0, 3, 128};
        c.control = StepControl{.dt_init = 1e-3, .dt_min = 1e-12, .dt_max = 1e-2,
                                .cfl = 0.5, .t_end = 0.5, .u_max_cap = 0.0};
        c.initial_u = FieldSpec::constant(1.0);
        c.initial_v = FieldSpec::constant(1.0);
        c.initial_w = FieldSpec::constant(1.0);
        c.thresholds = Thresholds{.m = 4.0 * std::numbers::pi / 3.0, .A = 10.0, .K = 1.0,
                                  .eps = 1.0, .p = 1.1};
    } else if (name == "subcritical3d") {
        c.mode = RunMode::full;
        c.params = Params{2.0, 1.0, 1.0, 1.0, 1.0, 1.0};
        c.grid = GridConfig{1.0, 3, 256};
        c.control = StepControl{.dt_init = 1e-4, .dt_min = 1e-12, .dt_max = 5e-3,
                                .cfl = 0.5, .t_end = 1.0, .u_max_cap = 0.0};
        c.initial_u = FieldSpec::bump(0.25, 1.0);
        c.initial_v = FieldSpec::constant(0.2);
        c.initial_w = FieldSpec::constant(0.1);
        c.thresholds = Thresholds{.m = 1.0, .A = 5.0, .K = 1.0, .eps = 1.0, .p = 1.1};
    } else if (name == "supercritical3d") {
        c.mode = RunMode::full;
        c.params = Params{2.0, 1.0, 1.0, 1.0, 1.0, 1.0};
        c.grid = GridConfig{1.0, 3, 512};
        // The cap must be reachable on a finite grid: concentrating the whole
        // mass into the innermost cell bounds sup u by m / V_0, so the
        // default 1e6 x initial peak would never fire for peaked data.
        c.control = StepControl{.dt_init = 1e-5, .dt_min = 1e-12, .dt_max = 1e-3,
                                .cfl = 0.4, .t_end = 5.0, .u_max_cap = 4e7};
        c.initial_u = FieldSpec::bump(0.02, 30.0);
        c.initial_v = FieldSpec::spike(1.0, 0.5, 1.0, 0.02);
        c.initial_w = FieldSpec::constant(1.0);
        c.thresholds = Thresholds{.m = 30.0, .A = 60.0, .K = 10.0, .eps = 50.0, .p = 1.1};
    } else {
        throw ConfigError("preset", "unknown preset: " + name);
    }
    return c;
}

} // namespace chemoblow
