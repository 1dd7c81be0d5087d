#pragma once

// Evaluation measures for the benchmark harness plus two Monte-Carlo
// diagnostics for the collinearity behaviour of the misspecified fit.

#include <cstdint>
#include <optional>
#include <string>

#include "pulearn/datamodel.hpp"

namespace pulearn {

// One evaluation record per (classifier, c[, n], replication).
struct MetricsRow {
    std::string classifier;
    double c = 0.0;
    std::optional<std::size_t> n;
    std::size_t replication = 0;
    std::optional<double> f1;
    std::optional<double> balanced_accuracy;
    std::optional<double> angle_degrees;
    std::optional<double> eta_hat;
    std::optional<double> train_seconds;
    std::string status = "ok";
};

// 2 TP / (2 TP + FP + FN); 0 when the denominator vanishes.
double f1_true(const PredictedLabels& pred, const std::vector<int>& y);

// (TPR + TNR) / 2; requires both classes in y.
double balanced_accuracy(const PredictedLabels& pred, const std::vector<int>& y);

// Angle in degrees, in [0, 180]; cosine clamped before acos.
double angle_between(const Vector& a, const Vector& b);

// Least-squares collinearity scalar: argmin_t |fitted - t * truth|.
double estimate_eta(const Vector& fitted_dir, const Vector& true_dir);

// Monte-Carlo check of the identity eta / c = E sigma'(true score) /
// E sigma'(projected score) that holds for zero-mean normal features. Both
// expectations use the same draws. Returns the relative discrepancy
// |eta/c - ratio| / (eta/c).
double eta_identity_discrepancy(const ModelParams& true_params, const ModelParams& fitted_params,
                                double c, const Matrix& cov_chol_lower, std::size_t draws,
                                CounterRng rng);

}  // namespace pulearn
