#include "pulearn/metrics.hpp"

#include <cmath>
#include <string>

#include "pulearn/logistic.hpp"

namespace pulearn {

namespace {

constexpr double kRadToDeg = 57.29577951308232;

void require_same_length(std::size_t a, std::size_t b, const char* where) {
    if (a != b)
        throw LengthMismatch(std::string(where) + ": " + std::to_string(a) + " predictions vs " +
                             std::to_string(b) + " truths");
}

}  // namespace

double f1_true(const PredictedLabels& pred, const std::vector<int>& y) {
    require_same_length(pred.size(), y.size(), "f1_true");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        tp += static_cast<std::size_t>(pred[i] == 1 && y[i] == 1);
        fp += static_cast<std::size_t>(pred[i] == 1 && y[i] == 0);
        fn += static_cast<std::size_t>(pred[i] == 0 && y[i] == 1);
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

double balanced_accuracy(const PredictedLabels& pred, const std::vector<int>& y) {
    require_same_length(pred.size(), y.size(), "balanced_accuracy");
    std::size_t tp = 0, tn = 0, pos = 0, neg = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 1) {
            ++pos;
            tp += static_cast<std::size_t>(pred[i] == 1);
        } else {
            ++neg;
            tn += static_cast<std::size_t>(pred[i] == 0);
        }
    }
    if (pos == 0 || neg == 0)
        throw SingleClassTruth("balanced_accuracy: truth labels are all " +
                               std::to_string(pos == 0 ? 0 : 1));
    return 0.5 * (static_cast<double>(tp) / static_cast<double>(pos) +
                  static_cast<double>(tn) / static_cast<double>(neg));
}

double angle_between(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw LengthMismatch("angle_between: lengths " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    const double na = std::sqrt(dot(a, a));
    const double nb = std::sqrt(dot(b, b));
    if (na == 0.0 || nb == 0.0) throw ZeroVector("angle_between: zero-length vector");
    const double cosine = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
    return std::acos(cosine) * kRadToDeg;
}

double estimate_eta(const Vector& fitted_dir, const Vector& true_dir) {
    if (fitted_dir.size() != true_dir.size())
        throw LengthMismatch("estimate_eta: lengths " + std::to_string(fitted_dir.size()) +
                             " vs " + std::to_string(true_dir.size()));
    const double denom = dot(true_dir, true_dir);
    if (denom == 0.0) throw ZeroVector("estimate_eta: true direction is zero");
    return dot(fitted_dir, true_dir) / denom;
}

double eta_identity_discrepancy(const ModelParams& true_params, const ModelParams& fitted_params,
                                double c, const Matrix& cov_chol_lower, std::size_t draws,
                                CounterRng rng) {
    if (!(c > 0.0 && c <= 1.0))
        throw COutOfRange("eta_identity_discrepancy: c = " + std::to_string(c));
    if (draws == 0) throw InvalidArgument("eta_identity_discrepancy: zero draws");
    const std::size_t p = true_params.direction.size();
    if (fitted_params.direction.size() != p)
        throw LengthMismatch("eta_identity_discrepancy: direction lengths differ");
    if (cov_chol_lower.rows() != p || cov_chol_lower.cols() != p)
        throw DimensionMismatch("eta_identity_discrepancy: factor order does not match direction");

    const double eta = estimate_eta(fitted_params.direction, true_params.direction);

    // Both expectations share the draw stream; for identical parameter pairs
    // the ratio is then exactly one.
    const Vector zero_mean(p, 0.0);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const Vector x = sample_mvn(zero_mean, cov_chol_lower, rng);
        const double projection = dot(x, true_params.direction);
        const double st = sigma(true_params.intercept + projection);
        const double sf = sigma(fitted_params.intercept + eta * projection);
        num += st * (1.0 - st);
        den += sf * (1.0 - sf);
    }
    const double ratio = num / den;
    const double target = eta / c;
    return std::abs(target - ratio) / target;
}

}  // namespace pulearn
