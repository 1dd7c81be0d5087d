#include "pulearn/numkit.hpp"

#include <cmath>
#include <string>

namespace pulearn {

namespace {
constexpr double kPivotFloor = 1e-12;
constexpr double kSymmetryTol = 1e-10;
constexpr double kPi = 3.141592653589793238462643383279502884;
}  // namespace

bool Matrix::all_finite() const noexcept {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix cholesky(const Matrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n)
        throw DimensionMismatch("cholesky: matrix is " + std::to_string(n) + "x" +
                                std::to_string(m.cols()) + ", expected square");

    double scale = 0.0;
    for (double v : m.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol * std::max(scale, 1.0))
                throw InvalidArgument("cholesky: matrix is not symmetric at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");

    Matrix lower(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = m(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
        if (pivot <= kPivotFloor)
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(pivot) +
                                      " at column " + std::to_string(j));
        lower(j, j) = std::sqrt(pivot);
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = m(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= lower(i, k) * lower(j, k);
            lower(i, j) = acc / lower(j, j);
        }
    }
    return lower;
}

Vector solve_spd(const Matrix& m, const Vector& rhs) {
    const std::size_t n = m.rows();
    if (rhs.size() != n)
        throw DimensionMismatch("solve_spd: rhs length " + std::to_string(rhs.size()) +
                                " does not match matrix order " + std::to_string(n));
    const Matrix lower = cholesky(m);

    // forward: L y = rhs
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = rhs[i];
        for (std::size_t k = 0; k < i; ++k) acc -= lower(i, k) * y[k];
        y[i] = acc / lower(i, i);
    }
    // backward: L^T x = y
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) acc -= lower(k, ii) * x[k];
        x[ii] = acc / lower(ii, ii);
    }
    return x;
}

double CounterRng::normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Vector sample_mvn(const Vector& mean, const Matrix& chol_lower, CounterRng& rng) {
    const std::size_t d = mean.size();
    if (chol_lower.rows() != d || chol_lower.cols() != d)
        throw DimensionMismatch("sample_mvn: factor is " + std::to_string(chol_lower.rows()) +
                                "x" + std::to_string(chol_lower.cols()) + ", mean has length " +
                                std::to_string(d));
    Vector z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = rng.normal();

    Vector out(mean);
    for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= i; ++k) acc += chol_lower(i, k) * z[k];
        out[i] += acc;
    }
    return out;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace pulearn
