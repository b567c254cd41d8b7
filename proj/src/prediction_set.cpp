#include "calmet/prediction_set.hpp"

#include "calmet/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace calmet {

double clamp_probability(double p, double tol) {
    if (std::isnan(p)) throw precondition_error("clamp_probability: p is NaN");
    if (p < 0.0 || p > 1.0)
        throw precondition_error("clamp_probability: p = " + std::to_string(p) + " outside [0, 1]");
    if (!(tol > 0.0) || !(tol < 0.5) || std::isnan(tol))
        throw precondition_error("clamp_probability: tol must lie in (0, 0.5)");
    if (p < tol) return tol;
    const double upper = 1.0 - tol;
    if (p > upper) return upper;
    return p;
}

std::vector<double> probs_to_logits(std::span<const double> probs, const LinkFunction& link,
                                    double tol) {
    std::vector<double> logits;
    logits.reserve(probs.size());
    for (double p : probs) logits.push_back(link.inverse(clamp_probability(p, tol)));
    return logits;
}

BinaryPredictionSet::BinaryPredictionSet(std::vector<double> logits, std::vector<int> labels)
    : logits_(std::move(logits)), labels_(std::move(labels)) {
    if (logits_.size() != labels_.size())
        throw precondition_error("BinaryPredictionSet: logits and labels differ in length");
    if (logits_.empty()) throw precondition_error("BinaryPredictionSet: need at least one sample");
    for (std::size_t i = 0; i < logits_.size(); ++i) {
        if (!std::isfinite(logits_[i]))
            throw precondition_error("BinaryPredictionSet: non-finite logit at index " +
                                     std::to_string(i));
        if (labels_[i] != 0 && labels_[i] != 1)
            throw precondition_error("BinaryPredictionSet: label at index " + std::to_string(i) +
                                     " is not 0 or 1");
    }
}

BinaryPredictionSet BinaryPredictionSet::from_probabilities(std::span<const double> probs,
                                                            std::vector<int> labels,
                                                            const LinkFunction& link, double tol) {
    return BinaryPredictionSet(probs_to_logits(probs, link, tol), std::move(labels));
}

MulticlassPredictionSet::MulticlassPredictionSet(std::vector<std::vector<double>> probs,
                                                 std::vector<int> labels)
    : probs_(std::move(probs)), labels_(std::move(labels)) {
    if (probs_.size() != labels_.size())
        throw precondition_error("MulticlassPredictionSet: probs and labels differ in length");
    if (probs_.empty()) throw precondition_error("MulticlassPredictionSet: need at least one row");
    const std::size_t k = probs_.front().size();
    if (k < 2) throw precondition_error("MulticlassPredictionSet: need at least two classes");
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const auto& row = probs_[i];
        if (row.size() != k)
            throw precondition_error("MulticlassPredictionSet: ragged row at index " +
                                     std::to_string(i));
        double sum = 0.0;
        for (double p : row) {
            if (!std::isfinite(p) || p < 0.0 || p > 1.0)
                throw precondition_error(
                    "MulticlassPredictionSet: probability outside [0, 1] at row " +
                    std::to_string(i));
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw precondition_error("MulticlassPredictionSet: row " + std::to_string(i) +
                                     " sums to " + std::to_string(sum) + ", not 1");
        if (labels_[i] < 0 || static_cast<std::size_t>(labels_[i]) >= k)
            throw precondition_error("MulticlassPredictionSet: label out of range at row " +
                                     std::to_string(i));
    }
}

} // namespace calmet
