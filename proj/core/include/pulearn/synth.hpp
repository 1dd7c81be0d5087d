#pragma once

// SCAR synthetic data: multivariate-normal features, a Bernoulli draw from
// the logistic posterior for the true class, and an independent labeling
// coin with fixed frequency c for the positives.

#include <cstdint>

#include "pulearn/datamodel.hpp"

namespace pulearn {

struct SynthSpec {
    Vector mean;
    Matrix covariance;
    ModelParams beta;  // true intercept and direction
    double c = 1.0;    // label frequency, in (0, 1]
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

// The library's reference three-feature study configuration:
// mean (1, 1, -1), unit variances, Cov(X1,X2) = 0.2, Cov(X1,X3) = -0.2,
// Cov(X2,X3) = 0, intercept -1 and direction (-1, 1, 1).
SynthSpec reference_spec(double c, std::size_t n, std::uint64_t seed);

// Draws the dataset row by row: x from the normal spec, y from the logistic
// posterior, s = y * Bernoulli(c). Feature, class-coin and label-coin
// streams are forked separately and keyed per row, so regenerating with a
// different c reproduces the same (x, y) realizations bit for bit.
Dataset generate(const SynthSpec& spec);

}  // namespace pulearn
