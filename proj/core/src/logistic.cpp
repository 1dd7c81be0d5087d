#include "pulearn/logistic.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace pulearn {

namespace {

void compute_scores(const Dataset& d, const Vector& beta, Vector& scores) {
    const std::size_t n = d.n();
    const std::size_t p = d.p();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = beta[0];
        const auto row = d.features.row(i);
        for (std::size_t j = 0; j < p; ++j) acc += row[j] * beta[j + 1];
        scores[i] = acc;
    }
}

double weighted_loglik(const std::vector<int>& resp, const CaseWeights* weights,
                       const Vector& scores) {
    double acc = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double w = weights ? (*weights)[i] : 1.0;
        acc += w * (resp[i] == 1 ? log_sigmoid(scores[i]) : log_sigmoid(-scores[i]));
    }
    return acc;
}

double ridge_penalty(const Vector& beta, double ridge) {
    double acc = 0.0;
    for (std::size_t j = 1; j < beta.size(); ++j) acc += beta[j] * beta[j];
    return 0.5 * ridge * acc;
}

}  // namespace

double loglik_naive(const ModelParams& b, const Dataset& d) {
    const Vector scores = decision_scores(b, d);
    double acc = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        acc += d.s_labels[i] == 1 ? log_sigmoid(scores[i]) : log_sigmoid(-scores[i]);
    return acc;
}

Vector grad_naive(const ModelParams& b, const Dataset& d) {
    const Vector scores = decision_scores(b, d);
    Vector grad(d.p() + 1, 0.0);
    for (std::size_t i = 0; i < d.n(); ++i) {
        const double r = d.s_labels[i] - sigma(scores[i]);
        grad[0] += r;
        const auto row = d.features.row(i);
        for (std::size_t j = 0; j < d.p(); ++j) grad[j + 1] += row[j] * r;
    }
    return grad;
}

FitReport fit_logistic(const Dataset& d, const FitConfig& cfg, const CaseWeights* weights,
                       const std::vector<int>* responses) {
    const auto t0 = std::chrono::steady_clock::now();

    validate(d);
    if (cfg.gradient_tolerance <= 0.0) throw InvalidArgument("fit_logistic: tolerance must be > 0");
    if (cfg.ridge < 0.0) throw InvalidArgument("fit_logistic: ridge must be >= 0");
    if (cfg.max_iterations < 0) throw InvalidArgument("fit_logistic: negative iteration cap");

    const std::size_t n = d.n();
    const std::size_t p = d.p();
    const std::size_t dim = p + 1;

    const std::vector<int>& resp = responses ? *responses : d.s_labels;
    if (resp.size() != n)
        throw DimensionMismatch("fit_logistic: " + std::to_string(resp.size()) +
                                " responses for " + std::to_string(n) + " rows");
    for (std::size_t i = 0; i < n; ++i)
        if (resp[i] != 0 && resp[i] != 1)
            throw InvalidLabel("fit_logistic: response[" + std::to_string(i) + "] = " +
                               std::to_string(resp[i]));

    if (weights) {
        if (weights->size() != n)
            throw DimensionMismatch("fit_logistic: " + std::to_string(weights->size()) +
                                    " weights for " + std::to_string(n) + " rows");
        for (double w : *weights)
            if (!(w >= 0.0)) throw InvalidArgument("fit_logistic: negative case weight");
    }

    // both response classes must carry positive mass
    double mass1 = 0.0, mass0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights ? (*weights)[i] : 1.0;
        (resp[i] == 1 ? mass1 : mass0) += w;
    }
    if (mass1 + mass0 <= 0.0) throw InvalidArgument("fit_logistic: all case weights are zero");
    if (mass1 == 0.0 || mass0 == 0.0)
        throw DegenerateLabels("fit_logistic: responses with positive weight are all " +
                               std::to_string(mass1 == 0.0 ? 0 : 1));

    Vector beta(dim, 0.0);
    Vector scores(n, 0.0);
    compute_scores(d, beta, scores);
    double objective = weighted_loglik(resp, weights, scores) - ridge_penalty(beta, cfg.ridge);

    FitReport report;
    report.loglik_trace.push_back(objective);

    Vector grad(dim);
    Matrix hessian(dim, dim);
    Vector candidate(dim), cand_scores(n);
    bool converged = false;
    int accepted = 0;

    const auto penalized_gradient = [&] {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = weights ? (*weights)[i] : 1.0;
            const double r = w * (resp[i] - sigma(scores[i]));
            grad[0] += r;
            const auto row = d.features.row(i);
            for (std::size_t j = 0; j < p; ++j) grad[j + 1] += row[j] * r;
        }
        for (std::size_t j = 1; j < dim; ++j) grad[j] -= cfg.ridge * beta[j];
    };

    for (int it = 0; it < cfg.max_iterations; ++it) {
        penalized_gradient();
        if (max_abs(grad) <= cfg.gradient_tolerance) {
            converged = true;
            break;
        }

        // expected information plus ridge
        std::fill(hessian.data().begin(), hessian.data().end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = weights ? (*weights)[i] : 1.0;
            const double s = sigma(scores[i]);
            const double a = w * s * (1.0 - s);
            if (a == 0.0) continue;
            const auto row = d.features.row(i);
            hessian(0, 0) += a;
            for (std::size_t j = 0; j < p; ++j) hessian(0, j + 1) += a * row[j];
            for (std::size_t j = 0; j < p; ++j) {
                const double aj = a * row[j];
                for (std::size_t k = j; k < p; ++k) hessian(j + 1, k + 1) += aj * row[k];
            }
        }
        for (std::size_t j = 1; j < dim; ++j) hessian(j, j) += cfg.ridge;
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = j + 1; k < dim; ++k) hessian(k, j) = hessian(j, k);

        Vector step;
        try {
            step = solve_spd(hessian, grad);
        } catch (const NotPositiveDefinite& e) {
            throw SingularHessian(std::string("fit_logistic: Hessian solve failed: ") + e.what());
        }

        // damped acceptance: shrink until the objective does not decrease.
        // Decreases below the objective's own rounding resolution cannot be
        // certified either way, so they are accepted; otherwise the pure
        // Newton step gets spuriously rejected near the optimum and the
        // gradient can never collapse below tolerance.
        const double resolution =
            4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(objective));
        double alpha = 1.0;
        bool took_step = false;
        for (int halving = 0; halving < 60; ++halving) {
            for (std::size_t j = 0; j < dim; ++j) candidate[j] = beta[j] + alpha * step[j];
            compute_scores(d, candidate, cand_scores);
            const double cand_obj =
                weighted_loglik(resp, weights, cand_scores) - ridge_penalty(candidate, cfg.ridge);
            if (!cfg.step_damping || cand_obj >= objective - resolution) {
                beta.swap(candidate);
                scores.swap(cand_scores);
                objective = cand_obj;
                took_step = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!took_step) break;  // step underflowed; leave converged to the gradient test above

        ++accepted;
        report.loglik_trace.push_back(objective);
    }

    if (!converged) {  // iteration cap may have landed on a stationary point
        penalized_gradient();
        converged = max_abs(grad) <= cfg.gradient_tolerance;
    }

    if (converged && cfg.ridge == 0.0 && max_abs(scores) > 30.0)
        throw SeparationDetected("fit_logistic: |score| > 30 at an unpenalized optimum");

    report.params.intercept = beta[0];
    report.params.direction.assign(beta.begin() + 1, beta.end());
    report.final_loglik = weighted_loglik(resp, weights, scores);
    report.iterations = accepted;
    report.converged = converged;
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace pulearn
