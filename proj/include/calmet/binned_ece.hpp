#pragma once

#include "calmet/link.hpp"
#include "calmet/prediction_set.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace calmet {

// Partition of [0, 1] used by the plug-in estimator.
//   uniform:    bin j covers [j/m, (j+1)/m), the last bin closed at 1.
//   equal_mass: quantile bins from the sample's own order statistics
//               (sorted rank r of n goes to bin floor(r*m/n), ties stable).
struct BinningScheme {
    enum class Kind { uniform, equal_mass };

    Kind kind;
    std::size_t bins;

    static BinningScheme uniform(std::size_t m);
    static BinningScheme equal_mass(std::size_t m);
};

struct ReliabilityBin {
    std::optional<double> lo, hi;               // absent for empty equal-mass bins
    std::size_t count = 0;
    std::optional<double> mean_conf, mean_label; // absent when count == 0
};

struct ReliabilityDiagram {
    std::vector<ReliabilityBin> bins;
    std::size_t total = 0;

    // sum_j (count_j / n) |mean_label_j - mean_conf_j|; empty bins contribute 0
    double ece() const;
};

// Bin index per probability under the scheme. Rejects values outside [0, 1].
std::vector<std::size_t> bin_assignments(std::span<const double> probs,
                                         const BinningScheme& scheme);

ReliabilityDiagram reliability(const BinaryPredictionSet& data, const LinkFunction& link,
                               const BinningScheme& scheme);

// Computed through the reliability diagram, so diagram-derived and direct
// values agree bit-for-bit.
double binned_ece(const BinaryPredictionSet& data, const LinkFunction& link,
                  const BinningScheme& scheme);

// Top-class reduction: confidence = max_i probs[i], reduced label = 1 iff the
// true label attains the row maximum (argmax-set membership, exact equality),
// logit = link.inverse(clamp(confidence, tol)).
BinaryPredictionSet top_class_reduce(const MulticlassPredictionSet& data,
                                     const LinkFunction& link, double tol = kDefaultClampTol);

} // namespace calmet
