#pragma once

#include <string>
#include <vector>

#include "chemoblow/dynamics.hpp"

namespace chemoblow {

enum class RunMode { full, reduced, compare };

const char* to_string(RunMode m);

enum class FieldKind { constant, bump, spike, file };

struct FieldSpec {
    FieldKind kind = FieldKind::constant;
    double value = 0.0;      // constant
    double sigma = 0.1;      // bump width / spike core
    double mass = 1.0;       // bump
    double base = 0.0;       // spike
    double amplitude = 1.0;  // spike
    double kappa = 0.4;      // spike
    std::string path;        // file

    static FieldSpec constant(double value);
    static FieldSpec bump(double sigma, double mass);
    static FieldSpec spike(double base, double amplitude, double kappa, double sigma);
    static FieldSpec file(std::string path);
};

struct GridConfig {
    double R = 1.0;
    int n = 3;
    int N = 256;
};

struct Thresholds {
    double m = 1.0;
    double A = 10.0;
    double K = 1.0;
    double eps = 1.0;
    double p = 1.1;  // in (1, 2n/(n+2))
};

struct DriveConfig {
    bool sharpen_v = true;
    double lambda_cap = 0.5;
    double sigma0 = 0.0;  // 0 -> R/8
};

struct SweepConfig {
    std::vector<double> chi, xi, sigma, mass;
};

struct CompareConfig {
    std::vector<double> dts{1e-3, 5e-4, 2.5e-4};
};

struct RunConfig {
    RunMode mode = RunMode::full;
    Params params{2.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    GridConfig grid;
    StepControl control{1e-4, 1e-12, 1e-2, 0.5, 1.0, 0.0};  // u_max_cap 0 = 1e6 x initial sup norm
    FieldSpec initial_u, initial_v, initial_w;
    Thresholds thresholds;
    DriveConfig drive;
    SweepConfig sweep;
    CompareConfig compare;
    std::string output_dir = "out";
    int snapshot_every = 0;  // 0 = initial and final states only
    long seed = 0;           // reserved for randomized search orderings
};

// Strict parser: unknown keys are rejected with the dotted path of the
// offending field; missing sections fall back to the defaults above.
RunConfig config_from_json_text(const std::string& text);

// Canonical serialization (sorted keys, 2-space indent). Feeding the
// output back through config_from_json_text reproduces it byte for byte.
std::string config_to_json_text(const RunConfig& c);

RunConfig load_config(const std::string& path);

void validate(const RunConfig& c);

RunConfig preset_config(const std::string& name);  // subcritical3d, supercritical3d, steady
std::vector<std::string> preset_names();

} // namespace chemoblow
