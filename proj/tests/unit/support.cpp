#include "support.hpp"

#include <cmath>
#include <cstdlib>
#include <unistd.h>

namespace testsupport {

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double step) {
    Vector grad(x.size());
    Vector probe = x;
    for (std::size_t j = 0; j < x.size(); ++j) {
        probe[j] = x[j] + step;
        const double up = f(probe);
        probe[j] = x[j] - step;
        const double down = f(probe);
        probe[j] = x[j];
        grad[j] = (up - down) / (2.0 * step);
    }
    return grad;
}

Matrix random_spd(std::size_t dim, double cond, CounterRng& rng) {
    // random basis, orthogonalized
    Matrix q(dim, dim);
    for (auto& v : q.data()) v = rng.normal();
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < i; ++k) {
            const double proj = pulearn::dot(q.row(i), q.row(k));
            for (std::size_t j = 0; j < dim; ++j) q(i, j) -= proj * q(k, j);
        }
        const double norm = std::sqrt(pulearn::dot(q.row(i), q.row(i)));
        for (std::size_t j = 0; j < dim; ++j) q(i, j) /= norm;
    }

    Vector eigenvalues(dim);
    const double lo = 1.0 / std::sqrt(cond);
    const double hi = std::sqrt(cond);
    for (std::size_t i = 0; i < dim; ++i) {
        const double t = dim == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(dim - 1);
        eigenvalues[i] = lo * std::pow(hi / lo, t);
    }

    Matrix m(dim, dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
            double acc = 0.0;
            for (std::size_t k = 0; k < dim; ++k) acc += eigenvalues[k] * q(k, a) * q(k, b);
            m(a, b) = acc;
        }
    return m;
}

Dataset toy_dataset(std::size_t n, std::size_t p, std::uint64_t seed) {
    CounterRng rng(seed);
    Dataset d;
    d.features = Matrix(n, p);
    for (auto& v : d.features.data()) v = rng.normal();
    d.s_labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) d.s_labels[i] = rng.uniform() < 0.4 ? 1 : 0;
    d.s_labels[0] = 1;  // both classes present regardless of the draws
    d.s_labels[n - 1] = 0;
    d.name = "toy";
    return d;
}

Dataset banknote_like() {
    pulearn::SynthSpec spec;
    spec.mean = {0.0, 0.0, 0.0, 0.0};
    spec.covariance = Matrix::identity(4);
    spec.beta.intercept = -0.95;
    spec.beta.direction = {4.0, -3.3, 2.6, 1.3};
    spec.c = 1.0;  // fully labeled truth; benchmarks relabel as needed
    spec.n = 1372;
    spec.seed = 0xba27;
    Dataset d = pulearn::generate(spec);
    d.name = "banknote_like";
    return d;
}

std::filesystem::path real_banknote_path() {
    return std::filesystem::path(PULEARN_SOURCE_DIR) / "data" / "banknote.csv";
}

Dataset banknote_or_surrogate() {
    const auto path = real_banknote_path();
    if (std::filesystem::exists(path)) {
        Dataset d = pulearn::load_csv(path, "class", "1");
        return d;
    }
    return banknote_like();
}

std::filesystem::path scratch_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("pulearn_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testsupport
