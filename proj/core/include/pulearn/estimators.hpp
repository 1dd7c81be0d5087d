#pragma once

// The classifier zoo: the naive logistic fit on observed labels, its
// enhanced variant (same direction, intercept re-chosen by maximizing the
// observable F1 surrogate), the joint likelihood fit over parameters and
// label frequency, and Elkan-Noto style weighted fits.

#include <cstdint>
#include <utility>
#include <vector>

#include "pulearn/logistic.hpp"

namespace pulearn {

struct SweepResult {
    double chosen_intercept = 0.0;  // w0 reproducing the winning prediction set under score > 0
    double best_score = 0.0;        // maximal empirical F1_PU
    std::vector<std::pair<double, double>> curve;  // (threshold, F1_PU), ascending thresholds
};

struct JointConfig {
    int restarts = 5;       // the joint likelihood is non-concave in the parameters
    double c_floor = 1e-3;  // keeps log(c) finite; c = c_floor + (1 - c_floor) * sigma(theta)
    FitConfig fit;
    std::uint64_t seed = 0;  // drives the perturbed restarts
};

// Logistic fit treating the observed labels as responses. No label-frequency
// estimate is attached.
ModelParams fit_naive(const Dataset& d, const FitConfig& cfg = {});

// Observable F1 surrogate: recall^2 / P(predicted positive), computable
// without negative labels. Returns 0 when nothing is predicted positive.
double f1pu_empirical(const PredictedLabels& predictions, const std::vector<int>& s_labels);

// Scans every distinct raw score t_i = x_i . direction as a threshold
// (predict positive iff t_i >= threshold), evaluating F1_PU incrementally in
// one descending pass; counts change by +-1 per point. Ties in the maximum
// break toward the larger threshold (fewer positives). chosen_intercept is
// the midpoint-based offset that makes strict score > 0 classification
// reproduce the winning prediction set.
SweepResult sweep_intercept(const Vector& direction, const Dataset& d);

// Naive direction with the intercept replaced by the F1_PU maximizer. The
// sweep runs on the training data itself unless sweep_data is supplied.
ModelParams fit_enhanced(const Dataset& d, const FitConfig& cfg = {});
ModelParams fit_enhanced(const Dataset& d, const FitConfig& cfg, const Dataset& sweep_data);

// sum_i s_i log(c sigma(score_i)) + (1 - s_i) log(1 - c sigma(score_i)).
// Requires params.label_frequency in (0, 1]; equals loglik_naive at c = 1.
double loglik_joint(const ModelParams& b, const Dataset& d);

// Joint objective and gradient in unconstrained coordinates
// packed = (b_0, b_1..b_p, theta) with c = c_floor + (1 - c_floor) sigma(theta).
// With c_floor = 0, theta is exactly logit(c). Exposed for the optimizer and
// for derivative checks.
double joint_objective(const Vector& packed, const Dataset& d, double c_floor = 0.0);
Vector joint_gradient(const Vector& packed, const Dataset& d, double c_floor = 0.0);

// BFGS ascent of the joint likelihood over (b, theta), restarted from the
// naive fit at c = 1, from the naive fit at c = 2 * mean(s) and from seeded
// random perturbations; keeps the best restart. label_frequency is populated
// in the returned params.
FitReport fit_joint(const Dataset& d, const JointConfig& jcfg = {});

// Label-frequency estimate: mean predicted positive-probability of the naive
// model over the labeled examples, clamped to [1e-3, 1].
double estimate_c_en(const Dataset& d, const ModelParams& naive);

// Weighted logistic fit on the expanded pseudo-labeled sample: labeled rows
// enter once as positives with weight 1; each unlabeled row enters twice,
// as a positive with weight ((1-c)/c) * odds(naive score), clamped to [0,1],
// and as a negative with the complementary weight. The naive model is fitted
// internally unless supplied.
ModelParams fit_weighted_en(const Dataset& d, double c, const FitConfig& cfg = {});
ModelParams fit_weighted_en(const Dataset& d, double c, const FitConfig& cfg,
                            const ModelParams& naive);

}  // namespace pulearn
