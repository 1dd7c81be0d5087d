#pragma once

// Shared test fixtures and independent oracles. Everything here stays off
// the library's own code paths where it is used as a check: finite
// differences for gradients, brute-force scans for maximizers, direct
// construction for linear solves.

#include <filesystem>
#include <functional>
#include <string>

#include "pulearn/pulearn.hpp"

namespace testsupport {

using pulearn::CounterRng;
using pulearn::Dataset;
using pulearn::Matrix;
using pulearn::Vector;

// Central finite differences of a scalar function.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                   double step = 1e-5);

// Random symmetric positive definite matrix with eigenvalues spread over
// [1/sqrt(cond), sqrt(cond)], built from a Gram-Schmidt orthogonalized
// random basis.
Matrix random_spd(std::size_t dim, double cond, CounterRng& rng);

// Small random PU dataset: standard normal features, both label classes
// guaranteed present.
Dataset toy_dataset(std::size_t n, std::size_t p, std::uint64_t seed);

// Stand-in for the banknote benchmark with matched shape: 1372 rows, four
// standardized features, positive fraction near 0.44, classes separable
// enough that a plain logistic fit on the truth is nearly perfect. Used by
// benchmark-style tests when the real file is not present in data/.
Dataset banknote_like();

// data/banknote.csv relative to the repository root, if bundled.
std::filesystem::path real_banknote_path();

// Loads the real banknote file when available, otherwise banknote_like().
Dataset banknote_or_surrogate();

// Fresh scratch directory under the system temp path.
std::filesystem::path scratch_dir(const std::string& tag);

}  // namespace testsupport
