#pragma once

// Experiment runner: executes a classifier x c (x n) x replication grid over
// a synthetic spec or a recipe-loaded dataset and writes plot-ready tables.
//
// Outputs in the configured directory:
//   raw.csv       one row per (classifier, c, n, replication)
//   aggregate.csv means and standard errors per grid cell
//   timings.csv   mean fit wall time per grid cell
//
// raw.csv is byte-identical across runs of the same config and seed; since
// measured wall times are not reproducible they go to timings.csv and the
// train_seconds column of raw.csv stays empty unless raw_timings is set.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pulearn/config.hpp"
#include "pulearn/estimators.hpp"
#include "pulearn/ingest.hpp"
#include "pulearn/metrics.hpp"
#include "pulearn/synth.hpp"

namespace pulearn {

// oracle fits on ground truth; weighted_en_true_c uses the grid's c,
// weighted_en_estimated_c plugs in the labeled-mean estimate.
const std::vector<std::string>& known_classifiers();

struct ExperimentConfig {
    bool synthetic = true;

    // synthetic source
    std::vector<std::size_t> n_grid;  // training sizes
    std::size_t test_n = 2000;        // held-out evaluation rows
    Vector synth_mean;                // defaults: the reference spec
    Matrix synth_cov;
    ModelParams synth_beta;

    // csv source
    std::filesystem::path recipe;
    double test_fraction = 0.3;

    std::vector<double> c_grid;
    std::vector<std::string> classifiers;
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "results";
    bool raw_timings = false;
    bool heldout_sweep = false;  // tune the enhanced intercept on a held-out slice of train
};

ExperimentConfig parse_experiment_config(const std::filesystem::path& path);
ExperimentConfig experiment_config_from_kv(const KvConfig& kv,
                                           const std::filesystem::path& base_dir);

// Canonical key = value form; parse(serialize(cfg)) reproduces cfg.
std::string serialize_experiment_config(const ExperimentConfig& cfg);

struct RunSummary {
    std::size_t rows_total = 0;
    std::size_t rows_failed = 0;
    std::filesystem::path raw_path;
    std::filesystem::path aggregate_path;
    std::filesystem::path timings_path;
};

RunSummary run(const ExperimentConfig& cfg, int jobs = 1, bool quiet = true);

// Writes rows with the stable column order
// classifier,c,n,replication,f1,balanced_accuracy,angle_degrees,eta_hat,train_seconds,status
// Absent values become empty cells.
void emit_report(const std::vector<MetricsRow>& rows, const std::filesystem::path& path);

}  // namespace pulearn
