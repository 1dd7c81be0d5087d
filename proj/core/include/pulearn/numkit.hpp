#pragma once

// Dense row-major matrices, Cholesky solves and a splittable counter-based
// RNG. Problem sizes in this library stay near 33k rows by a few hundred
// columns, so plain contiguous loops are all the machinery we need.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pulearn/errors.hpp"

namespace pulearn {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    const Vector& data() const noexcept { return data_; }
    Vector& data() noexcept { return data_; }

    bool all_finite() const noexcept;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

// Lower-triangular factor L with L * L^T = m. The input must be square and
// symmetric (checked to 1e-10 relative to the largest entry). A pivot at or
// below 1e-12 signals a degenerate covariance and throws NotPositiveDefinite
// instead of propagating NaNs.
Matrix cholesky(const Matrix& m);

// Solves m * x = rhs for symmetric positive definite m via Cholesky.
Vector solve_spd(const Matrix& m, const Vector& rhs);

// Splittable counter-based RNG: draw i of a stream is a hash of (key, i).
// fork() derives an independent child stream, so per-row coins can be keyed
// by stable row ids and any draw replays exactly. State is explicit and
// never global; copies replay the same sequence.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(mix64(seed + kKeySalt)) {}

    CounterRng fork(std::uint64_t stream) const {
        return CounterRng(mix64(key_ ^ mix64(stream + kForkSalt)), 0);
    }

    std::uint64_t next_u64() { return mix64(key_ + ++counter_ * kGamma); }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; consumes two uniforms, keeps no spare
    double normal();

private:
    CounterRng(std::uint64_t key, std::uint64_t counter) : key_(key), counter_(counter) {}

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kKeySalt = 0xD6E8FEB86659FD93ull;
    static constexpr std::uint64_t kForkSalt = 0x8BB84B93962EACC9ull;

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

// mean + chol_lower * z with z iid standard normal drawn from rng.
Vector sample_mvn(const Vector& mean, const Matrix& chol_lower, CounterRng& rng);

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double max_abs(std::span<const double> v);

}  // namespace pulearn
