#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pulearn/numkit.hpp"

namespace pulearn {

// A PU sample. Features carry no intercept column. s_labels is the observed
// labeling indicator; y_labels is the ground truth, present for synthetic
// data and for benchmark test splits only. Labeling marks positives only:
// s=1 implies y=1 whenever y is known.
struct Dataset {
    Matrix features;                           // n x p
    std::vector<int> s_labels;                 // 0/1
    std::optional<std::vector<int>> y_labels;  // 0/1, evaluation only
    std::vector<std::uint64_t> row_ids;        // stable identity across splits; empty = 0..n-1
    std::vector<std::string> feature_names;    // optional, parallel to columns
    std::string name;

    std::size_t n() const noexcept { return features.rows(); }
    std::size_t p() const noexcept { return features.cols(); }

    std::uint64_t row_id(std::size_t i) const {
        return row_ids.empty() ? static_cast<std::uint64_t>(i) : row_ids[i];
    }
};

// Separating-hyperplane parameters. The intercept is stored apart from the
// direction (never as a constant feature column) so threshold tuning can
// swap it without touching the fitted direction.
struct ModelParams {
    double intercept = 0.0;
    Vector direction;                         // length p
    std::optional<double> label_frequency;    // c in (0, 1], when the estimator produces one
};

using PredictedLabels = std::vector<int>;

struct FitReport {
    ModelParams params;
    double final_loglik = 0.0;         // unpenalized log-likelihood at the solution
    std::vector<double> loglik_trace;  // penalized objective after each accepted step
    int iterations = 0;
    bool converged = false;
    double wall_time_seconds = 0.0;
};

// Checks every Dataset invariant. Throws InvalidLabel for non-binary
// entries, ScarViolation when s=1 meets y=0, DegenerateLabels when all s
// are equal, DimensionMismatch for inconsistent lengths.
void validate(const Dataset& d);

// score_i = intercept + x_i . direction
Vector decision_scores(const ModelParams& params, const Dataset& d);

// label_i = 1 iff score_i > 0; exact zeros classify as 0.
PredictedLabels classify(const ModelParams& params, const Dataset& d);

}  // namespace pulearn
