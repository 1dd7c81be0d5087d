#include "pulearn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>

namespace pulearn {

namespace {

enum Stream : std::uint64_t {
    kTrainData = 0,
    kTestData = 1,
    kSplits = 2,
    kScar = 3,
    kJoint = 4,
    kHeldout = 5
};

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : "nan";
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::string sanitize(std::string text) {
    for (char& ch : text)
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    return text;
}

struct Cell {
    double c = 0.0;
    std::size_t n = 0;  // synthetic train size; 0 for csv sources
    std::size_t replication = 0;
};

struct PreparedData {
    Dataset train;
    Dataset test;
    std::size_t reported_n = 0;
};

SynthSpec synth_spec_from_config(const ExperimentConfig& cfg, double c, std::size_t n,
                                 std::uint64_t seed) {
    SynthSpec spec;
    spec.mean = cfg.synth_mean;
    spec.covariance = cfg.synth_cov;
    spec.beta = cfg.synth_beta;
    spec.c = c;
    spec.n = n;
    spec.seed = seed;
    return spec;
}

PreparedData prepare_cell(const ExperimentConfig& cfg, const Dataset* base, const Cell& cell) {
    PreparedData data;
    const CounterRng root(cfg.seed);
    if (cfg.synthetic) {
        const std::uint64_t train_seed =
            root.fork(kTrainData).fork(cell.n).fork(cell.replication).next_u64();
        const std::uint64_t test_seed =
            root.fork(kTestData).fork(cell.n).fork(cell.replication).next_u64();
        data.train = generate(synth_spec_from_config(cfg, cell.c, cell.n, train_seed));
        data.test = generate(synth_spec_from_config(cfg, 1.0, cfg.test_n, test_seed));
        data.reported_n = cell.n;
    } else {
        SplitSpec spec;
        spec.test_fraction = cfg.test_fraction;
        spec.n_replications = cfg.replications;
        spec.seed = root.fork(kSplits).next_u64();
        auto [train, test] = split(*base, spec, cell.replication);
        auto [train_std, record] = standardize(train);
        data.test = apply_standardize(record, test);
        const std::uint64_t scar_seed = root.fork(kScar).fork(cell.replication).next_u64();
        data.train = scar_relabel(train_std, cell.c, scar_seed);
        data.reported_n = data.train.n();
    }
    return data;
}

ModelParams fit_one(const std::string& name, const ExperimentConfig& cfg, const Dataset& train,
                    const Cell& cell) {
    const FitConfig fit_cfg;
    if (name == "oracle") {
        if (!train.y_labels) throw MissingTruth("oracle classifier needs ground-truth labels");
        return fit_logistic(train, fit_cfg, nullptr, &*train.y_labels).params;
    }
    if (name == "naive") return fit_naive(train, fit_cfg);
    if (name == "enhanced") {
        if (!cfg.heldout_sweep) return fit_enhanced(train, fit_cfg);
        SplitSpec spec;
        spec.test_fraction = 0.3;
        spec.n_replications = 1;
        spec.seed = CounterRng(cfg.seed).fork(kHeldout).fork(cell.replication).next_u64();
        auto [fit_part, sweep_part] = split(train, spec, 0);
        return fit_enhanced(fit_part, fit_cfg, sweep_part);
    }
    if (name == "joint") {
        JointConfig jcfg;
        jcfg.fit = fit_cfg;
        jcfg.seed = CounterRng(cfg.seed).fork(kJoint).fork(cell.n).fork(cell.replication).next_u64();
        return fit_joint(train, jcfg).params;
    }
    if (name == "weighted_en_true_c") return fit_weighted_en(train, cell.c, fit_cfg);
    if (name == "weighted_en_estimated_c") {
        const ModelParams naive = fit_naive(train, fit_cfg);
        return fit_weighted_en(train, estimate_c_en(train, naive), fit_cfg, naive);
    }
    throw ConfigError("unknown classifier '" + name + "'");
}

MetricsRow evaluate_one(const std::string& name, const ExperimentConfig& cfg,
                        const PreparedData& data, const Cell& cell) {
    MetricsRow row;
    row.classifier = name;
    row.c = cell.c;
    row.n = data.reported_n;
    row.replication = cell.replication;
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const ModelParams params = fit_one(name, cfg, data.train, cell);
        row.train_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const PredictedLabels pred = classify(params, data.test);
        if (!data.test.y_labels) throw MissingTruth("test split has no ground-truth labels");
        row.f1 = f1_true(pred, *data.test.y_labels);
        row.balanced_accuracy = balanced_accuracy(pred, *data.test.y_labels);
        if (cfg.synthetic) {
            row.angle_degrees = angle_between(params.direction, cfg.synth_beta.direction);
            row.eta_hat = estimate_eta(params.direction, cfg.synth_beta.direction);
        }
    } catch (const std::exception& e) {
        row.status = sanitize(std::string("failed: ") + e.what());
        row.f1.reset();
        row.balanced_accuracy.reset();
        row.angle_degrees.reset();
        row.eta_hat.reset();
        row.train_seconds.reset();
    }
    return row;
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.c_grid.empty()) throw ConfigError("c_grid is empty");
    for (double c : cfg.c_grid)
        if (!(c > 0.0 && c <= 1.0))
            throw ConfigError("c_grid entry " + format_double(c) + " outside (0, 1]");
    if (cfg.classifiers.empty()) throw ConfigError("classifiers is empty");
    const auto& known = known_classifiers();
    for (const auto& name : cfg.classifiers)
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw ConfigError("unknown classifier '" + name + "'");
    if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
    if (cfg.synthetic) {
        if (cfg.n_grid.empty()) throw ConfigError("n_grid is empty");
        for (std::size_t n : cfg.n_grid)
            if (n < 2) throw ConfigError("n_grid entries must be >= 2");
        if (cfg.test_n < 2) throw ConfigError("test_n must be >= 2");
        const std::size_t p = cfg.synth_mean.size();
        if (cfg.synth_cov.rows() != p || cfg.synth_cov.cols() != p)
            throw ConfigError("synth_cov order does not match synth_mean length");
        if (cfg.synth_beta.direction.size() != p)
            throw ConfigError("synth_beta has wrong length");
    } else {
        if (cfg.recipe.empty()) throw ConfigError("recipe path is empty");
        if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
            throw ConfigError("test_fraction outside (0, 1)");
    }
}

struct Stat {
    std::size_t count = 0;
    double mean = 0.0;
    double se = 0.0;
};

Stat stat_of(const std::vector<double>& values) {
    Stat s;
    s.count = values.size();
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.se = std::sqrt(ss / static_cast<double>(values.size() - 1) /
                         static_cast<double>(values.size()));
    }
    return s;
}

std::string stat_cells(const Stat& s) {
    if (s.count == 0) return ",";
    return format_double(s.mean) + "," + (s.count > 1 ? format_double(s.se) : std::string());
}

}  // namespace

const std::vector<std::string>& known_classifiers() {
    static const std::vector<std::string> names = {
        "oracle", "naive", "enhanced", "joint", "weighted_en_true_c", "weighted_en_estimated_c"};
    return names;
}

ExperimentConfig parse_experiment_config(const std::filesystem::path& path) {
    return experiment_config_from_kv(KvConfig::parse_file(path), path.parent_path());
}

ExperimentConfig experiment_config_from_kv(const KvConfig& kv,
                                           const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    const std::string source = kv.require("source");
    if (source == "synth") {
        cfg.synthetic = true;
        const SynthSpec ref = reference_spec(1.0, 2, 0);
        cfg.synth_mean = kv.has("synth_mean") ? Vector(kv.get_double_list("synth_mean")) : ref.mean;
        if (kv.has("synth_cov")) {
            const auto flat = kv.get_double_list("synth_cov");
            const std::size_t p = cfg.synth_mean.size();
            if (flat.size() != p * p)
                throw ConfigError(kv.origin() + ": synth_cov needs " + std::to_string(p * p) +
                                  " entries (row-major)");
            cfg.synth_cov = Matrix(p, p);
            std::copy(flat.begin(), flat.end(), cfg.synth_cov.data().begin());
        } else {
            cfg.synth_cov = ref.covariance;
        }
        if (kv.has("synth_beta")) {
            const auto packed = kv.get_double_list("synth_beta");
            if (packed.size() != cfg.synth_mean.size() + 1)
                throw ConfigError(kv.origin() + ": synth_beta needs intercept plus " +
                                  std::to_string(cfg.synth_mean.size()) + " entries");
            cfg.synth_beta.intercept = packed[0];
            cfg.synth_beta.direction.assign(packed.begin() + 1, packed.end());
        } else {
            cfg.synth_beta = ref.beta;
        }
        cfg.n_grid.clear();
        for (double v : kv.get_double_list("n_grid"))
            cfg.n_grid.push_back(static_cast<std::size_t>(v));
        cfg.test_n = kv.get_count("test_n", 2000);
    } else if (source == "csv") {
        cfg.synthetic = false;
        std::filesystem::path recipe = kv.require("recipe");
        cfg.recipe = recipe.is_absolute() ? recipe : (base_dir / recipe).lexically_normal();
        cfg.test_fraction = kv.get_double("test_fraction", 0.3);
    } else {
        throw ConfigError(kv.origin() + ": source must be 'synth' or 'csv', got '" + source + "'");
    }

    cfg.c_grid = kv.get_double_list("c_grid");
    cfg.classifiers = kv.get_list("classifiers");
    cfg.replications = kv.get_count("replications", 1);
    cfg.seed = kv.get_u64("seed", 0);
    std::filesystem::path out = kv.get("out").value_or("results");
    cfg.out_dir = out.is_absolute() ? out : (base_dir / out).lexically_normal();
    cfg.raw_timings = kv.get_bool("raw_timings", false);
    cfg.heldout_sweep = kv.get_bool("heldout_sweep", false);
    validate_config(cfg);
    return cfg;
}

std::string serialize_experiment_config(const ExperimentConfig& cfg) {
    KvConfig kv;
    const auto join_doubles = [](const auto& values) {
        std::string out;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out += ", ";
            out += format_double(static_cast<double>(values[i]));
        }
        return out;
    };
    const auto join_strings = [](const std::vector<std::string>& values) {
        std::string out;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out += ", ";
            out += values[i];
        }
        return out;
    };

    kv.set("source", cfg.synthetic ? "synth" : "csv");
    if (cfg.synthetic) {
        kv.set("synth_mean", join_doubles(cfg.synth_mean));
        kv.set("synth_cov", join_doubles(cfg.synth_cov.data()));
        Vector packed{cfg.synth_beta.intercept};
        packed.insert(packed.end(), cfg.synth_beta.direction.begin(),
                      cfg.synth_beta.direction.end());
        kv.set("synth_beta", join_doubles(packed));
        kv.set("n_grid", join_doubles(cfg.n_grid));
        kv.set("test_n", std::to_string(cfg.test_n));
    } else {
        kv.set("recipe", cfg.recipe.string());
        kv.set("test_fraction", format_double(cfg.test_fraction));
    }
    kv.set("c_grid", join_doubles(cfg.c_grid));
    kv.set("classifiers", join_strings(cfg.classifiers));
    kv.set("replications", std::to_string(cfg.replications));
    kv.set("seed", std::to_string(cfg.seed));
    kv.set("out", cfg.out_dir.string());
    kv.set("raw_timings", cfg.raw_timings ? "true" : "false");
    kv.set("heldout_sweep", cfg.heldout_sweep ? "true" : "false");
    return kv.serialize();
}

void emit_report(const std::vector<MetricsRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "classifier,c,n,replication,f1,balanced_accuracy,angle_degrees,eta_hat,"
           "train_seconds,status\n";
    for (const auto& row : rows) {
        out << row.classifier << ',' << format_double(row.c) << ','
            << (row.n ? std::to_string(*row.n) : std::string()) << ',' << row.replication << ','
            << format_optional(row.f1) << ',' << format_optional(row.balanced_accuracy) << ','
            << format_optional(row.angle_degrees) << ',' << format_optional(row.eta_hat) << ','
            << format_optional(row.train_seconds) << ',' << row.status << '\n';
    }
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

RunSummary run(const ExperimentConfig& cfg, int jobs, bool quiet) {
    validate_config(cfg);

    Dataset base;
    if (!cfg.synthetic) base = load_dataset(load_recipe(cfg.recipe));

    std::vector<Cell> cells;
    const std::vector<std::size_t> n_values = cfg.synthetic ? cfg.n_grid : std::vector<std::size_t>{0};
    for (double c : cfg.c_grid)
        for (std::size_t n : n_values)
            for (std::size_t rep = 0; rep < cfg.replications; ++rep) cells.push_back({c, n, rep});

    const std::size_t per_cell = cfg.classifiers.size();
    std::vector<MetricsRow> rows(cells.size() * per_cell);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex io_mutex;
    const auto worker = [&] {
        while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            const Cell& cell = cells[idx];
            std::optional<PreparedData> data;
            std::string prep_failure;
            try {
                data.emplace(prepare_cell(cfg, cfg.synthetic ? nullptr : &base, cell));
            } catch (const std::exception& e) {
                prep_failure = sanitize(std::string("failed: ") + e.what());
            }
            for (std::size_t k = 0; k < per_cell; ++k) {
                MetricsRow& row = rows[idx * per_cell + k];
                if (data) {
                    row = evaluate_one(cfg.classifiers[k], cfg, *data, cell);
                } else {
                    row.classifier = cfg.classifiers[k];
                    row.c = cell.c;
                    row.n = cfg.synthetic ? std::optional<std::size_t>(cell.n) : std::nullopt;
                    row.replication = cell.replication;
                    row.status = prep_failure;
                }
            }
            const std::size_t finished = done.fetch_add(1) + 1;
            if (!quiet) {
                const std::lock_guard<std::mutex> lock(io_mutex);
                std::fprintf(stderr, "\r[%zu/%zu] c=%g n=%zu rep=%zu", finished, cells.size(),
                             cell.c, cell.n, cell.replication);
                if (finished == cells.size()) std::fprintf(stderr, "\n");
            }
        }
    };

    const int thread_count = std::max(1, jobs);
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::stable_sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
        return std::tie(a.classifier, a.c, a.n, a.replication) <
               std::tie(b.classifier, b.c, b.n, b.replication);
    });

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create '" + cfg.out_dir.string() + "': " + ec.message());

    RunSummary summary;
    summary.rows_total = rows.size();
    for (const auto& row : rows)
        summary.rows_failed += static_cast<std::size_t>(row.status != "ok");
    summary.raw_path = cfg.out_dir / "raw.csv";
    summary.aggregate_path = cfg.out_dir / "aggregate.csv";
    summary.timings_path = cfg.out_dir / "timings.csv";

    // raw.csv: timing cells are only populated on request, so the file is
    // byte-identical run to run
    std::vector<MetricsRow> raw_rows = rows;
    if (!cfg.raw_timings)
        for (auto& row : raw_rows) row.train_seconds.reset();
    emit_report(raw_rows, summary.raw_path);

    // aggregates per (classifier, c, n) over ok rows
    struct CellStats {
        std::vector<double> f1, ba, angle, eta, seconds;
    };
    std::vector<std::tuple<std::string, double, std::optional<std::size_t>>> keys;
    std::vector<CellStats> stats;
    for (const auto& row : rows) {
        if (row.status != "ok") continue;
        const auto key = std::make_tuple(row.classifier, row.c, row.n);
        std::size_t at = keys.size();
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i] == key) {
                at = i;
                break;
            }
        if (at == keys.size()) {
            keys.push_back(key);
            stats.emplace_back();
        }
        CellStats& cs = stats[at];
        if (row.f1) cs.f1.push_back(*row.f1);
        if (row.balanced_accuracy) cs.ba.push_back(*row.balanced_accuracy);
        if (row.angle_degrees) cs.angle.push_back(*row.angle_degrees);
        if (row.eta_hat) cs.eta.push_back(*row.eta_hat);
        if (row.train_seconds) cs.seconds.push_back(*row.train_seconds);
    }

    {
        std::ofstream out(summary.aggregate_path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + summary.aggregate_path.string() + "'");
        out << "classifier,c,n,replications_ok,f1_mean,f1_se,balanced_accuracy_mean,"
               "balanced_accuracy_se,angle_degrees_mean,angle_degrees_se,eta_hat_mean,"
               "eta_hat_se\n";
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const auto& [name, c, n] = keys[i];
            out << name << ',' << format_double(c) << ','
                << (n ? std::to_string(*n) : std::string()) << ',' << stats[i].f1.size() << ','
                << stat_cells(stat_of(stats[i].f1)) << ',' << stat_cells(stat_of(stats[i].ba))
                << ',' << stat_cells(stat_of(stats[i].angle)) << ','
                << stat_cells(stat_of(stats[i].eta)) << '\n';
        }
    }
    {
        std::ofstream out(summary.timings_path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + summary.timings_path.string() + "'");
        out << "classifier,c,n,replications_ok,train_seconds_mean,train_seconds_se\n";
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const auto& [name, c, n] = keys[i];
            out << name << ',' << format_double(c) << ','
                << (n ? std::to_string(*n) : std::string()) << ',' << stats[i].seconds.size()
                << ',' << stat_cells(stat_of(stats[i].seconds)) << '\n';
        }
    }
    return summary;
}

}  // namespace pulearn
