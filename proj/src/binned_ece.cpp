#include "calmet/binned_ece.hpp"

#include "calmet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace calmet {

namespace {

BinningScheme checked(BinningScheme::Kind kind, std::size_t m) {
    if (m < 1) throw precondition_error("BinningScheme: bin count must be at least 1");
    return BinningScheme{kind, m};
}

std::size_t uniform_bin(double p, std::size_t m) {
    // floor(p*m) can land one off the half-open edges after rounding; nudge
    // until the double-valued edges j/m <= p < (j+1)/m hold.
    const double md = static_cast<double>(m);
    std::size_t j = std::min<std::size_t>(m - 1, static_cast<std::size_t>(p * md));
    while (j + 1 < m && p >= static_cast<double>(j + 1) / md) ++j;
    while (j > 0 && p < static_cast<double>(j) / md) --j;
    return j;
}

} // namespace

BinningScheme BinningScheme::uniform(std::size_t m) { return checked(Kind::uniform, m); }

BinningScheme BinningScheme::equal_mass(std::size_t m) { return checked(Kind::equal_mass, m); }

std::vector<std::size_t> bin_assignments(std::span<const double> probs,
                                         const BinningScheme& scheme) {
    if (probs.empty()) throw precondition_error("bin_assignments: empty input");
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (!(probs[i] >= 0.0) || !(probs[i] <= 1.0))
            throw precondition_error("bin_assignments: probability outside [0, 1] at index " +
                                     std::to_string(i));

    const std::size_t n = probs.size();
    const std::size_t m = scheme.bins;
    std::vector<std::size_t> assignment(n);
    if (scheme.kind == BinningScheme::Kind::uniform) {
        for (std::size_t i = 0; i < n; ++i) assignment[i] = uniform_bin(probs[i], m);
        return assignment;
    }

    // equal_mass: stable argsort, then split ranks evenly
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });
    for (std::size_t rank = 0; rank < n; ++rank) assignment[order[rank]] = rank * m / n;
    return assignment;
}

ReliabilityDiagram reliability(const BinaryPredictionSet& data, const LinkFunction& link,
                               const BinningScheme& scheme) {
    const std::size_t n = data.size();
    std::vector<double> probs;
    probs.reserve(n);
    for (double h : data.logits()) probs.push_back(link.forward(h));

    const std::vector<std::size_t> assignment = bin_assignments(probs, scheme);
    const std::size_t m = scheme.bins;

    std::vector<double> conf_sum(m, 0.0), label_sum(m, 0.0);
    std::vector<std::size_t> count(m, 0);
    std::vector<double> lo(m, 0.0), hi(m, 0.0);
    std::vector<bool> seen(m, false);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = assignment[i];
        conf_sum[j] += probs[i];
        label_sum[j] += data.labels()[i];
        ++count[j];
        if (!seen[j]) {
            lo[j] = hi[j] = probs[i];
            seen[j] = true;
        } else {
            lo[j] = std::min(lo[j], probs[i]);
            hi[j] = std::max(hi[j], probs[i]);
        }
    }

    ReliabilityDiagram diagram;
    diagram.total = n;
    diagram.bins.resize(m);
    const double md = static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) {
        ReliabilityBin& bin = diagram.bins[j];
        bin.count = count[j];
        if (scheme.kind == BinningScheme::Kind::uniform) {
            bin.lo = static_cast<double>(j) / md;
            bin.hi = static_cast<double>(j + 1) / md;
        } else if (seen[j]) {
            bin.lo = lo[j];
            bin.hi = hi[j];
        }
        if (count[j] > 0) {
            bin.mean_conf = conf_sum[j] / static_cast<double>(count[j]);
            bin.mean_label = label_sum[j] / static_cast<double>(count[j]);
        }
    }
    return diagram;
}

double ReliabilityDiagram::ece() const {
    double sum = 0.0;
    for (const ReliabilityBin& bin : bins) {
        if (bin.count == 0) continue;
        sum += static_cast<double>(bin.count) / static_cast<double>(total) *
               std::abs(*bin.mean_label - *bin.mean_conf);
    }
    return sum;
}

double binned_ece(const BinaryPredictionSet& data, const LinkFunction& link,
                  const BinningScheme& scheme) {
    return reliability(data, link, scheme).ece();
}

BinaryPredictionSet top_class_reduce(const MulticlassPredictionSet& data,
                                     const LinkFunction& link, double tol) {
    const std::size_t n = data.size();
    std::vector<double> confidence(n);
    std::vector<int> reduced(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = data.probs()[i];
        const double top = *std::max_element(row.begin(), row.end());
        confidence[i] = top;
        reduced[i] = row[static_cast<std::size_t>(data.labels()[i])] == top ? 1 : 0;
    }
    return BinaryPredictionSet::from_probabilities(confidence, std::move(reduced), link, tol);
}

} // namespace calmet
