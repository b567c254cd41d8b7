#pragma once

#include "calmet/link.hpp"

#include <span>
#include <vector>

namespace calmet {

// Default tolerance pulling probabilities away from {0, 1} before taking
// logits; keeps |logit| <= ~16.2 under the sigmoid link.
inline constexpr double kDefaultClampTol = 1e-7;

// min(max(p, tol), 1 - tol); identity for p already in [tol, 1 - tol].
// Rejects NaN p, p outside [0, 1], and tol outside (0, 0.5).
double clamp_probability(double p, double tol);

// link.inverse(clamp_probability(p, tol)) elementwise; all outputs finite.
std::vector<double> probs_to_logits(std::span<const double> probs, const LinkFunction& link,
                                    double tol = kDefaultClampTol);

// Paired (logit, binary label) samples: the empirical measure the estimators
// run on. Immutable after construction; construction validates everything.
class BinaryPredictionSet {
public:
    BinaryPredictionSet(std::vector<double> logits, std::vector<int> labels);

    static BinaryPredictionSet from_probabilities(std::span<const double> probs,
                                                  std::vector<int> labels,
                                                  const LinkFunction& link,
                                                  double tol = kDefaultClampTol);

    std::size_t size() const { return logits_.size(); }
    std::span<const double> logits() const { return logits_; }
    std::span<const int> labels() const { return labels_; }

private:
    std::vector<double> logits_;
    std::vector<int> labels_;
};

// Probability rows plus integer labels for k-class problems; reduced to a
// BinaryPredictionSet by top_class_reduce.
class MulticlassPredictionSet {
public:
    MulticlassPredictionSet(std::vector<std::vector<double>> probs, std::vector<int> labels);

    std::size_t size() const { return probs_.size(); }
    std::size_t num_classes() const { return probs_.empty() ? 0 : probs_.front().size(); }
    const std::vector<std::vector<double>>& probs() const { return probs_; }
    std::span<const int> labels() const { return labels_; }

private:
    std::vector<std::vector<double>> probs_;
    std::vector<int> labels_;
};

} // namespace calmet
