#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "agdkit/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"agdkit: generic accelerated stochastic gradient experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::size_t seeds_override = 0;
    std::size_t jobs = 1;
    double delta_override = 0.0;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seeds", seeds_override, "override run.seeds");
        cmd->add_option("--jobs", jobs, "worker threads for seed sweeps");
        cmd->add_option("--delta", delta_override, "override run.delta");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "single experiment: trajectories + manifest");
    add_common(run_cmd, true);
    CLI::App* rates_cmd = app.add_subcommand("rates", "rate study over the horizon list");
    add_common(rates_cmd, true);
    CLI::App* verify_cmd = app.add_subcommand("verify", "lemma/property/certificate suite");
    add_common(verify_cmd, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify_cmd->parsed()) return agdkit::exp::cmd_verify(std::string(out_dir) + "/verify.json");

        agdkit::exp::ExperimentConfig config = agdkit::exp::load_config(config_path);
        if (seeds_override > 0) config.sweep.seeds = seeds_override;
        if (delta_override > 0.0) config.sweep.delta = delta_override;
        config.validate();

        if (run_cmd->parsed()) return agdkit::exp::cmd_run(config, out_dir);
        return agdkit::exp::cmd_rates(config, out_dir, jobs);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
