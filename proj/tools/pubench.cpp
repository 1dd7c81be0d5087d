// Experiment CLI: runs a classifier grid from a config file and writes
// raw.csv, aggregate.csv and timings.csv.

#include <unistd.h>

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "pulearn/pulearn.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Positive-unlabeled learning experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::int64_t seed_override = -1;
    int jobs = 1;
    bool quiet = false;

    CLI::App* run_cmd = app.add_subcommand("run", "Execute an experiment config");
    run_cmd->add_option("config", config_path, "Path to the experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--seed", seed_override, "Override the config seed");
    run_cmd->add_option("--out", out_override, "Override the output directory");
    run_cmd->add_option("--jobs", jobs, "Worker threads over grid cells")
        ->check(CLI::PositiveNumber);
    run_cmd->add_flag("--quiet", quiet, "Suppress progress output");

    CLI11_PARSE(app, argc, argv);

    try {
        pulearn::ExperimentConfig cfg = pulearn::parse_experiment_config(config_path);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        if (!out_override.empty()) cfg.out_dir = out_override;

        // carriage-return progress is only useful on a terminal
        const bool progress = !quiet && isatty(fileno(stderr));
        const pulearn::RunSummary summary = pulearn::run(cfg, jobs, !progress);
        if (!quiet) {
            std::fprintf(stderr, "wrote %s\n", summary.raw_path.string().c_str());
            std::fprintf(stderr, "wrote %s\n", summary.aggregate_path.string().c_str());
            std::fprintf(stderr, "wrote %s\n", summary.timings_path.string().c_str());
            if (summary.rows_failed > 0)
                std::fprintf(stderr, "%zu of %zu rows failed (see status column)\n",
                             summary.rows_failed, summary.rows_total);
        }
        return summary.rows_failed == summary.rows_total ? 1 : 0;
    } catch (const pulearn::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
