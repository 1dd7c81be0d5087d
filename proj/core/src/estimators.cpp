#include "pulearn/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace pulearn {

namespace {

double require_c(const ModelParams& b) {
    if (!b.label_frequency) throw COutOfRange("label_frequency is not set");
    const double c = *b.label_frequency;
    if (!(c > 0.0 && c <= 1.0))
        throw COutOfRange("label frequency " + std::to_string(c) + " outside (0, 1]");
    return c;
}

// log(1 - c * sigma(t)); for c < 1 the argument is bounded below by 1 - c,
// for c = 1 it reduces to log(sigma(-t)) and must not underflow.
double log_one_minus_c_sigma(double c, double t) {
    if (c == 1.0) return log_sigmoid(-t);
    return std::log((1.0 - c) + c * sigma(-t));
}

}  // namespace

ModelParams fit_naive(const Dataset& d, const FitConfig& cfg) {
    return fit_logistic(d, cfg).params;
}

double f1pu_empirical(const PredictedLabels& predictions, const std::vector<int>& s_labels) {
    if (predictions.size() != s_labels.size())
        throw LengthMismatch("f1pu_empirical: " + std::to_string(predictions.size()) +
                             " predictions vs " + std::to_string(s_labels.size()) + " labels");
    const std::size_t n = s_labels.size();
    std::size_t labeled = 0, predicted = 0, labeled_predicted = 0;
    for (std::size_t i = 0; i < n; ++i) {
        labeled += static_cast<std::size_t>(s_labels[i] == 1);
        predicted += static_cast<std::size_t>(predictions[i] == 1);
        labeled_predicted += static_cast<std::size_t>(s_labels[i] == 1 && predictions[i] == 1);
    }
    if (labeled == 0) throw NoLabeledExamples("f1pu_empirical: no s=1 examples");
    if (predicted == 0) return 0.0;
    const double recall = static_cast<double>(labeled_predicted) / static_cast<double>(labeled);
    const double pred_rate = static_cast<double>(predicted) / static_cast<double>(n);
    return recall * recall / pred_rate;
}

SweepResult sweep_intercept(const Vector& direction, const Dataset& d) {
    if (direction.size() != d.p())
        throw DimensionMismatch("sweep_intercept: direction has length " +
                                std::to_string(direction.size()) + ", dataset has " +
                                std::to_string(d.p()) + " features");
    if (std::all_of(direction.begin(), direction.end(), [](double v) { return v == 0.0; }))
        throw ZeroDirection("sweep_intercept: direction is all zeros");

    const std::size_t n = d.n();
    std::size_t total_labeled = 0;
    for (int s : d.s_labels) total_labeled += static_cast<std::size_t>(s);
    if (total_labeled == 0) throw NoLabeledExamples("sweep_intercept: no s=1 examples");

    // raw scores without an intercept
    std::vector<std::pair<double, int>> scored(n);
    for (std::size_t i = 0; i < n; ++i)
        scored[i] = {dot(d.features.row(i), direction), d.s_labels[i]};
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    // One descending pass over distinct scores; at threshold tau the
    // classifier predicts positive for every score >= tau, so the counts
    // grow by one point at a time.
    SweepResult result;
    result.curve.reserve(n);
    std::size_t predicted = 0, labeled_predicted = 0;
    double best = -1.0, best_threshold = 0.0;
    double next_above = 0.0;  // smallest distinct score above the current threshold
    bool have_above = false;
    std::size_t i = 0;
    while (i < n) {
        const double threshold = scored[i].first;
        while (i < n && scored[i].first == threshold) {
            ++predicted;
            labeled_predicted += static_cast<std::size_t>(scored[i].second == 1);
            ++i;
        }
        const double recall =
            static_cast<double>(labeled_predicted) / static_cast<double>(total_labeled);
        const double pred_rate = static_cast<double>(predicted) / static_cast<double>(n);
        const double f1pu = recall * recall / pred_rate;
        result.curve.emplace_back(threshold, f1pu);
        if (f1pu > best) {  // strict: ties keep the earlier, larger threshold
            best = f1pu;
            best_threshold = threshold;
            have_above = result.curve.size() > 1;
            if (have_above) next_above = result.curve[result.curve.size() - 2].first;
        }
    }

    std::reverse(result.curve.begin(), result.curve.end());
    result.best_score = best;

    // Place the boundary strictly below the winning threshold so that
    // score + w0 > 0 picks exactly the winning prediction set: midway to the
    // next distinct score below, or half a gap when the winner is the
    // smallest score.
    double boundary;
    const double tau = best_threshold;
    const auto below = std::find_if(result.curve.rbegin(), result.curve.rend(),
                                    [&](const auto& e) { return e.first < tau; });
    if (below != result.curve.rend()) {
        boundary = 0.5 * (tau + below->first);
    } else if (have_above) {
        boundary = tau - 0.5 * (next_above - tau);
    } else {
        boundary = tau - 0.5 * std::max(1.0, std::abs(tau));
    }
    result.chosen_intercept = -boundary;
    return result;
}

ModelParams fit_enhanced(const Dataset& d, const FitConfig& cfg) { return fit_enhanced(d, cfg, d); }

ModelParams fit_enhanced(const Dataset& d, const FitConfig& cfg, const Dataset& sweep_data) {
    ModelParams params = fit_naive(d, cfg);
    params.intercept = sweep_intercept(params.direction, sweep_data).chosen_intercept;
    return params;
}

double loglik_joint(const ModelParams& b, const Dataset& d) {
    const double c = require_c(b);
    const Vector scores = decision_scores(b, d);
    const double log_c = std::log(c);
    double acc = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (d.s_labels[i] == 1)
            acc += c == 1.0 ? log_sigmoid(scores[i]) : log_c + log_sigmoid(scores[i]);
        else
            acc += log_one_minus_c_sigma(c, scores[i]);
    }
    return acc;
}

double joint_objective(const Vector& packed, const Dataset& d, double c_floor) {
    const std::size_t p = d.p();
    if (packed.size() != p + 2)
        throw DimensionMismatch("joint_objective: expected " + std::to_string(p + 2) +
                                " packed parameters, got " + std::to_string(packed.size()));
    ModelParams b;
    b.intercept = packed[0];
    b.direction.assign(packed.begin() + 1, packed.end() - 1);
    b.label_frequency = c_floor + (1.0 - c_floor) * sigma(packed.back());
    return loglik_joint(b, d);
}

Vector joint_gradient(const Vector& packed, const Dataset& d, double c_floor) {
    const std::size_t p = d.p();
    if (packed.size() != p + 2)
        throw DimensionMismatch("joint_gradient: expected " + std::to_string(p + 2) +
                                " packed parameters, got " + std::to_string(packed.size()));
    const double theta = packed.back();
    const double c = c_floor + (1.0 - c_floor) * sigma(theta);

    Vector grad(p + 2, 0.0);
    double dc = 0.0;
    for (std::size_t i = 0; i < d.n(); ++i) {
        const auto row = d.features.row(i);
        double t = packed[0];
        for (std::size_t j = 0; j < p; ++j) t += row[j] * packed[j + 1];
        const double s = sigma(t);
        double dt;
        if (d.s_labels[i] == 1) {
            dt = 1.0 - s;
            dc += 1.0 / c;
        } else {
            // 1 - c*sigma(t) written as (1-c) + c*sigma(-t) to survive t >> 0
            const double denom = std::max((1.0 - c) + c * sigma(-t), 1e-300);
            dt = -c * s * sigma(-t) / denom;
            dc -= s / denom;
        }
        grad[0] += dt;
        for (std::size_t j = 0; j < p; ++j) grad[j + 1] += row[j] * dt;
    }
    grad[p + 1] = dc * (1.0 - c_floor) * sigma(theta) * sigma(-theta);
    return grad;
}

namespace {

struct AscentResult {
    Vector x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

// Dense BFGS ascent with Armijo backtracking. Dimensions here are tiny
// (p + 2), so the inverse-Hessian update is kept as plain matrix algebra.
template <typename F, typename G>
AscentResult bfgs_maximize(const F& value_fn, const G& grad_fn, Vector x0, int max_iterations,
                           double gradient_tolerance) {
    const std::size_t dim = x0.size();
    AscentResult res;
    res.x = std::move(x0);
    res.value = value_fn(res.x);
    if (!std::isfinite(res.value)) throw InvalidArgument("bfgs: start value is not finite");
    res.trace.push_back(res.value);

    Matrix hinv = Matrix::identity(dim);
    Vector grad = grad_fn(res.x);
    Vector dir(dim), xn(dim), gn(dim), s(dim), y(dim), hy(dim);
    bool first_update = true;

    for (int it = 0; it < max_iterations; ++it) {
        if (max_abs(grad) <= gradient_tolerance) {
            res.converged = true;
            break;
        }
        // ascent direction hinv * grad
        for (std::size_t i = 0; i < dim; ++i) dir[i] = dot(hinv.row(i), grad);
        double slope = dot(dir, grad);
        if (slope <= 0.0) {  // curvature update went stale; restart from steepest ascent
            hinv = Matrix::identity(dim);
            dir = grad;
            slope = dot(grad, grad);
        }

        double alpha = 1.0;
        bool took_step = false;
        double candidate_value = res.value;
        for (int halving = 0; halving < 50; ++halving) {
            for (std::size_t i = 0; i < dim; ++i) xn[i] = res.x[i] + alpha * dir[i];
            candidate_value = value_fn(xn);
            if (std::isfinite(candidate_value) &&
                candidate_value >= res.value + 1e-4 * alpha * slope) {
                took_step = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!took_step) break;

        gn = grad_fn(xn);
        for (std::size_t i = 0; i < dim; ++i) {
            s[i] = xn[i] - res.x[i];
            y[i] = gn[i] - grad[i];  // gradient of the ascent objective
        }
        const double sy = -dot(s, y);  // positive when curvature is consistent with ascent
        if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
            if (first_update) {
                const double scale = sy / dot(y, y);
                for (std::size_t i = 0; i < dim; ++i) hinv(i, i) = scale;
                first_update = false;
            }
            // hinv <- (I - rho s y^T) hinv (I - rho y s^T) + rho s s^T, rho = 1/sy
            const double rho = 1.0 / sy;
            for (std::size_t i = 0; i < dim; ++i) hy[i] = dot(hinv.row(i), y);
            const double yhy = dot(y, hy);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    hinv(i, j) += rho * rho * yhy * s[i] * s[j] +
                                  rho * (s[i] * hy[j] + hy[i] * s[j]) + rho * s[i] * s[j];
        }

        res.x = xn;
        res.value = candidate_value;
        grad = gn;
        ++res.iterations;
        res.trace.push_back(res.value);
    }
    if (!res.converged) res.converged = max_abs(grad_fn(res.x)) <= gradient_tolerance;
    return res;
}

double squash_inverse(double c, double c_floor) {
    const double u = (c - c_floor) / (1.0 - c_floor);
    return std::log(u / (1.0 - u));
}

}  // namespace

FitReport fit_joint(const Dataset& d, const JointConfig& jcfg) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(d);
    if (jcfg.restarts < 1) throw InvalidArgument("fit_joint: restarts must be >= 1");
    if (!(jcfg.c_floor > 0.0 && jcfg.c_floor < 1.0))
        throw InvalidArgument("fit_joint: c_floor outside (0, 1)");

    const std::size_t p = d.p();
    const double floor = jcfg.c_floor;
    const auto value_fn = [&](const Vector& x) { return joint_objective(x, d, floor); };
    const auto grad_fn = [&](const Vector& x) { return joint_gradient(x, d, floor); };

    Vector naive_packed(p + 2, 0.0);
    try {
        const ModelParams naive = fit_naive(d, jcfg.fit);
        naive_packed[0] = naive.intercept;
        std::copy(naive.direction.begin(), naive.direction.end(), naive_packed.begin() + 1);
    } catch (const Error&) {
        // fall back to zero parameters as the perturbation base
    }

    double s_mean = 0.0;
    for (int s : d.s_labels) s_mean += s;
    s_mean /= static_cast<double>(d.n());

    CounterRng rng = CounterRng(jcfg.seed).fork(0x6a6f696e74);  // restart stream

    const AscentResult* best = nullptr;
    AscentResult best_storage;
    int failures = 0;
    std::string last_failure;
    for (int r = 0; r < jcfg.restarts; ++r) {
        Vector start(naive_packed);
        if (r == 0) {
            start.back() = 40.0;  // sigma(40) rounds to 1: the naive fit itself, c = 1
        } else if (r == 1) {
            const double c0 = std::clamp(2.0 * s_mean, floor + 1e-9, 1.0 - 1e-9);
            start.back() = squash_inverse(c0, floor);
        } else {
            CounterRng restart_rng = rng.fork(static_cast<std::uint64_t>(r));
            for (std::size_t j = 0; j + 1 < start.size(); ++j)
                start[j] = naive_packed[j] * (1.0 + 0.25 * restart_rng.normal()) +
                           0.1 * restart_rng.normal();
            const double u = 0.05 + 0.9 * restart_rng.uniform();
            start.back() = std::log(u / (1.0 - u));
        }
        try {
            AscentResult run = bfgs_maximize(value_fn, grad_fn, std::move(start),
                                             jcfg.fit.max_iterations, jcfg.fit.gradient_tolerance);
            if (!best || run.value > best->value) {
                best_storage = std::move(run);
                best = &best_storage;
            }
        } catch (const Error& e) {
            ++failures;
            last_failure = e.what();
        }
    }
    if (!best)
        throw AllRestartsFailed("fit_joint: all " + std::to_string(failures) +
                                " restarts failed; last error: " + last_failure);

    FitReport report;
    report.params.intercept = best->x[0];
    report.params.direction.assign(best->x.begin() + 1, best->x.end() - 1);
    report.params.label_frequency = floor + (1.0 - floor) * sigma(best->x.back());
    report.final_loglik = best->value;
    report.loglik_trace = best->trace;
    report.iterations = best->iterations;
    report.converged = best->converged;
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

double estimate_c_en(const Dataset& d, const ModelParams& naive) {
    const Vector scores = decision_scores(naive, d);
    double acc = 0.0;
    std::size_t labeled = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (d.s_labels[i] == 1) {
            acc += sigma(scores[i]);
            ++labeled;
        }
    }
    if (labeled == 0) throw NoLabeledExamples("estimate_c_en: no s=1 examples");
    return std::clamp(acc / static_cast<double>(labeled), 1e-3, 1.0);
}

ModelParams fit_weighted_en(const Dataset& d, double c, const FitConfig& cfg) {
    return fit_weighted_en(d, c, cfg, fit_naive(d, cfg));
}

ModelParams fit_weighted_en(const Dataset& d, double c, const FitConfig& cfg,
                            const ModelParams& naive) {
    if (!(c > 0.0 && c <= 1.0))
        throw COutOfRange("fit_weighted_en: label frequency " + std::to_string(c) +
                          " outside (0, 1]");
    validate(d);
    const Vector scores = decision_scores(naive, d);

    const std::size_t n = d.n();
    const std::size_t p = d.p();
    std::size_t unlabeled = 0;
    for (int s : d.s_labels) unlabeled += static_cast<std::size_t>(s == 0);

    // Expanded pseudo-sample: labeled rows stay positive with weight one;
    // each unlabeled row splits into a positive and a negative copy whose
    // weights come from the naive posterior odds.
    const std::size_t m = n + unlabeled;
    Dataset expanded;
    expanded.features = Matrix(m, p);
    expanded.s_labels.resize(m);
    expanded.name = d.name + "+en_expanded";
    CaseWeights weights(m);

    const double odds_factor = (1.0 - c) / c;
    std::size_t out = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto src = d.features.row(i);
        if (d.s_labels[i] == 1) {
            std::copy(src.begin(), src.end(), expanded.features.row(out).begin());
            expanded.s_labels[out] = 1;
            weights[out] = 1.0;
            ++out;
        } else {
            // odds_factor * exp(score) with exp possibly overflowing; at c = 1 the
            // weight is exactly zero regardless of the score
            const double w =
                odds_factor == 0.0 ? 0.0 : std::clamp(odds_factor * std::exp(scores[i]), 0.0, 1.0);
            std::copy(src.begin(), src.end(), expanded.features.row(out).begin());
            expanded.s_labels[out] = 1;
            weights[out] = w;
            ++out;
            std::copy(src.begin(), src.end(), expanded.features.row(out).begin());
            expanded.s_labels[out] = 0;
            weights[out] = 1.0 - w;
            ++out;
        }
    }

    ModelParams params = fit_logistic(expanded, cfg, &weights).params;
    params.label_frequency = c;
    return params;
}

}  // namespace pulearn
