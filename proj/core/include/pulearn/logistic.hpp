#pragma once

// Maximum-likelihood logistic regression by damped Newton (IRLS). One engine
// serves the plain fit on the observed labels, fits on caller-chosen
// responses (e.g. ground truth for an oracle reference), and weighted fits
// on expanded pseudo-labeled samples.

#include <cmath>
#include <vector>

#include "pulearn/datamodel.hpp"

namespace pulearn {

struct FitConfig {
    int max_iterations = 100;
    double gradient_tolerance = 1e-8;  // max-abs entry of the penalized score vector
    double ridge = 1e-6;               // on direction coordinates only, never the intercept
    bool step_damping = true;          // halve the Newton step until the objective is non-decreasing
};

// Nonnegative per-row weights; length matches the (possibly expanded) sample.
using CaseWeights = std::vector<double>;

// exp(t) / (1 + exp(t)), overflow-safe on both tails.
inline double sigma(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// log(sigma(t)) without intermediate under/overflow.
inline double log_sigmoid(double t) {
    if (t >= 0.0) return -std::log1p(std::exp(-t));
    return t - std::log1p(std::exp(t));
}

// sum_i s_i log sigma(score_i) + (1 - s_i) log(1 - sigma(score_i))
double loglik_naive(const ModelParams& b, const Dataset& d);

// Score equations: sum_i x_i (s_i - sigma(score_i)) with x_i = (1, row_i).
// Length p+1, intercept coordinate first. No ridge term.
Vector grad_naive(const ModelParams& b, const Dataset& d);

// Damped Newton ascent of the (ridge-penalized) log-likelihood. Responses
// default to the observed s labels; weights default to 1. converged means
// the max-abs penalized gradient reached the tolerance.
//
// Throws SingularHessian when the damped Hessian solve fails, and
// SeparationDetected when ridge is zero and the converged fit has a score
// beyond +-30 (complete separation: the unpenalized optimum is at infinity).
FitReport fit_logistic(const Dataset& d, const FitConfig& cfg = {},
                       const CaseWeights* weights = nullptr,
                       const std::vector<int>* responses = nullptr);

}  // namespace pulearn
