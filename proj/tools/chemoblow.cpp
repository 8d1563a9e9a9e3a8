// Command-line driver: run, compare, membership, sweep, drive.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "chemoblow/commands.hpp"
#include "chemoblow/errors.hpp"
#include "chemoblow/log.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    int workers = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    auto* cfg = cmd->add_option("--config", args.config_path, "config file (JSON)");
    auto* preset = cmd->add_option("--preset", args.preset, "built-in configuration")
                       ->check(CLI::IsMember(chemoblow::preset_names()));
    cfg->excludes(preset);
    cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
    cmd->add_option("--workers", args.workers, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
}

chemoblow::RunConfig resolve_config(const CommonArgs& args) {
    chemoblow::RunConfig cfg;
    if (!args.preset.empty()) {
        cfg = chemoblow::preset_config(args.preset);
    } else if (!args.config_path.empty()) {
        cfg = chemoblow::load_config(args.config_path);
    } else {
        throw chemoblow::ConfigError("cli", "provide --config or --preset");
    }
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial attraction-repulsion chemotaxis solver and blow-up diagnostics"};
    app.require_subcommand(1);

    CommonArgs run_args, compare_args, membership_args, sweep_args, drive_args;
    CLI::App* run = app.add_subcommand("run", "integrate one configuration");
    CLI::App* compare = app.add_subcommand("compare", "lockstep full-vs-reduced refinement study");
    CLI::App* membership = app.add_subcommand("membership", "check the blow-up class conditions");
    CLI::App* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
    CLI::App* drive = app.add_subcommand("drive", "search for nearby blow-up class data");
    add_common(run, run_args);
    add_common(compare, compare_args);
    add_common(membership, membership_args);
    add_common(sweep, sweep_args);
    add_common(drive, drive_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return chemoblow::cmd_run(resolve_config(run_args));
        }
        if (compare->parsed()) {
            auto cfg = resolve_config(compare_args);
            cfg.mode = chemoblow::RunMode::compare;
            return chemoblow::cmd_compare(cfg);
        }
        if (membership->parsed()) {
            return chemoblow::cmd_membership(resolve_config(membership_args), std::cout);
        }
        if (sweep->parsed()) {
            return chemoblow::cmd_sweep(resolve_config(sweep_args), sweep_args.workers);
        }
        if (drive->parsed()) {
            return chemoblow::cmd_drive(resolve_config(drive_args), std::cout);
        }
    } catch (const std::exception& e) {
        CB_LOG_ERROR("%s", e.what());
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
