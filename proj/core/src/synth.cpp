#include "pulearn/synth.hpp"

#include <numeric>
#include <string>

#include "pulearn/logistic.hpp"

namespace pulearn {

namespace {
enum Stream : std::uint64_t { kFeatures = 0, kClassCoin = 1, kLabelCoin = 2 };
}

SynthSpec reference_spec(double c, std::size_t n, std::uint64_t seed) {
    SynthSpec spec;
    spec.mean = {1.0, 1.0, -1.0};
    spec.covariance = Matrix::identity(3);
    spec.covariance(0, 1) = spec.covariance(1, 0) = 0.2;
    spec.covariance(0, 2) = spec.covariance(2, 0) = -0.2;
    spec.beta.intercept = -1.0;
    spec.beta.direction = {-1.0, 1.0, 1.0};
    spec.c = c;
    spec.n = n;
    spec.seed = seed;
    return spec;
}

Dataset generate(const SynthSpec& spec) {
    if (!(spec.c > 0.0 && spec.c <= 1.0))
        throw COutOfRange("generate: label frequency " + std::to_string(spec.c) +
                          " outside (0, 1]");
    if (spec.n == 0) throw InvalidArgument("generate: n must be >= 1");
    const std::size_t p = spec.mean.size();
    if (spec.beta.direction.size() != p)
        throw DimensionMismatch("generate: direction length " +
                                std::to_string(spec.beta.direction.size()) + " vs " +
                                std::to_string(p) + " features");

    const Matrix chol_lower = cholesky(spec.covariance);
    const CounterRng root(spec.seed);
    const CounterRng features = root.fork(kFeatures);
    const CounterRng class_coin = root.fork(kClassCoin);
    const CounterRng label_coin = root.fork(kLabelCoin);

    Dataset d;
    d.features = Matrix(spec.n, p);
    d.s_labels.resize(spec.n);
    d.y_labels.emplace(spec.n);
    d.row_ids.resize(spec.n);
    d.name = "synth";

    for (std::size_t i = 0; i < spec.n; ++i) {
        CounterRng row_rng = features.fork(i);
        const Vector x = sample_mvn(spec.mean, chol_lower, row_rng);
        std::copy(x.begin(), x.end(), d.features.row(i).begin());

        const double posterior = sigma(spec.beta.intercept + dot(x, spec.beta.direction));
        const int y = class_coin.fork(i).uniform() < posterior ? 1 : 0;
        const int s = y == 1 && label_coin.fork(i).uniform() < spec.c ? 1 : 0;
        (*d.y_labels)[i] = y;
        d.s_labels[i] = s;
        d.row_ids[i] = i;
    }
    return d;
}

}  // namespace pulearn
