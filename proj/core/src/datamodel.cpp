#include "pulearn/datamodel.hpp"

#include <cmath>
#include <string>

namespace pulearn {

namespace {

void check_binary(const std::vector<int>& labels, const char* what) {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] != 0 && labels[i] != 1)
            throw InvalidLabel(std::string(what) + "[" + std::to_string(i) + "] = " +
                               std::to_string(labels[i]) + ", expected 0 or 1");
}

}  // namespace

void validate(const Dataset& d) {
    const std::size_t n = d.n();
    if (d.s_labels.size() != n)
        throw DimensionMismatch("dataset '" + d.name + "': " + std::to_string(d.s_labels.size()) +
                                " s labels for " + std::to_string(n) + " rows");
    if (d.y_labels && d.y_labels->size() != n)
        throw DimensionMismatch("dataset '" + d.name + "': " + std::to_string(d.y_labels->size()) +
                                " y labels for " + std::to_string(n) + " rows");
    if (!d.row_ids.empty() && d.row_ids.size() != n)
        throw DimensionMismatch("dataset '" + d.name + "': " + std::to_string(d.row_ids.size()) +
                                " row ids for " + std::to_string(n) + " rows");
    if (!d.feature_names.empty() && d.feature_names.size() != d.p())
        throw DimensionMismatch("dataset '" + d.name + "': " +
                                std::to_string(d.feature_names.size()) + " feature names for " +
                                std::to_string(d.p()) + " columns");
    if (!d.features.all_finite())
        throw InvalidArgument("dataset '" + d.name + "': non-finite feature entry");

    check_binary(d.s_labels, "s");
    if (d.y_labels) {
        check_binary(*d.y_labels, "y");
        for (std::size_t i = 0; i < n; ++i)
            if (d.s_labels[i] == 1 && (*d.y_labels)[i] == 0)
                throw ScarViolation("row " + std::to_string(i) +
                                    " is labeled (s=1) but negative (y=0)");
    }

    std::size_t positives = 0;
    for (int s : d.s_labels) positives += static_cast<std::size_t>(s);
    if (positives == 0 || positives == n)
        throw DegenerateLabels("dataset '" + d.name + "': all s labels equal " +
                               std::to_string(positives == 0 ? 0 : 1));
}

Vector decision_scores(const ModelParams& params, const Dataset& d) {
    if (params.direction.size() != d.p())
        throw DimensionMismatch("decision_scores: direction has length " +
                                std::to_string(params.direction.size()) + ", dataset has " +
                                std::to_string(d.p()) + " features");
    Vector scores(d.n());
    for (std::size_t i = 0; i < d.n(); ++i)
        scores[i] = params.intercept + dot(d.features.row(i), params.direction);
    return scores;
}

PredictedLabels classify(const ModelParams& params, const Dataset& d) {
    const Vector scores = decision_scores(params, d);
    PredictedLabels labels(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) labels[i] = scores[i] > 0.0 ? 1 : 0;
    return labels;
}

}  // namespace pulearn
