#pragma once

// Real-dataset loading and the benchmark split/relabel protocol. Input files
// are headered delimiter-separated text (UTF-8, '.' decimals, no quoting of
// numeric cells). A dataset recipe describes how to turn a raw file into a
// numeric feature matrix: drop columns, one-hot expand columns, pick the
// label column and its positive value.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pulearn/datamodel.hpp"

namespace pulearn {

struct SplitSpec {
    double test_fraction = 0.3;      // in (0, 1)
    std::size_t n_replications = 200;
    std::uint64_t seed = 0;
};

// Strict numeric loader: every non-label cell must parse as a number.
// y = 1 iff the label cell equals positive_value; s starts equal to y.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::string& positive_value, char delimiter = ',');

struct DatasetRecipe {
    std::filesystem::path source;  // resolved relative to the recipe file
    std::string label_column;
    std::string positive_value;
    std::vector<std::string> one_hot;
    std::vector<std::string> drop;
    char delimiter = ',';
};

DatasetRecipe load_recipe(const std::filesystem::path& path);

// Applies the recipe: drops columns, one-hot expands categorical columns
// (one indicator per distinct value, values in sorted order), parses the
// rest as numbers.
Dataset load_dataset(const DatasetRecipe& recipe);

// Per-column affine map fitted on one dataset and replayable on another:
// x -> (x - shift) / scale.
struct StandardizeRecord {
    Vector shift;
    Vector scale;
};

// Centers and scales every column to mean zero, unit sample variance.
// Throws ConstantFeature (naming the column) when a column has no variance.
std::pair<Dataset, StandardizeRecord> standardize(const Dataset& d);

// Applies a fitted record to held-out data.
Dataset apply_standardize(const StandardizeRecord& record, const Dataset& d);

// Redraws s from the ground truth: each positive row keeps its label with
// probability c, negatives stay unlabeled. Coins are keyed by stable row id,
// not position, so relabeling commutes with splitting and a c-sweep reuses
// the same underlying uniforms.
Dataset scar_relabel(const Dataset& d, double c, std::uint64_t seed);

// Disjoint train/test partition; test size = round(n * test_fraction).
// Deterministic per (seed, replication).
std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& spec,
                                  std::size_t replication);

}  // namespace pulearn
