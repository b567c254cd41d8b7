#pragma once

#include "calmet/link.hpp"
#include "calmet/prediction_set.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace calmet {

// Finite-support population: masses p*, true conditionals g*(x) = P(Y=1|X=x),
// and the predictor values g(x), all over a common support of size n.
class DiscreteDistributionSpec {
public:
    DiscreteDistributionSpec(std::vector<double> mass, std::vector<double> true_conditional,
                             std::vector<double> predictor);

    std::size_t size() const { return mass_.size(); }
    std::span<const double> mass() const { return mass_; }
    std::span<const double> true_conditional() const { return true_conditional_; }
    std::span<const double> predictor() const { return predictor_; }

private:
    std::vector<double> mass_;
    std::vector<double> true_conditional_;
    std::vector<double> predictor_;
};

struct LevelSet {
    double value;                       // the shared predictor value
    std::vector<std::size_t> members;   // indices with exactly this value
};

// Partition of indices by exact float equality of their values (the one place
// where tolerance would silently change the metric under study). The weighted
// form additionally carries per-group mass and the mass-weighted conditional
// mean of the targets; the plain form leaves those vectors empty.
struct LevelSetPartition {
    std::vector<LevelSet> groups;           // ordered by first occurrence
    std::vector<std::size_t> group_of;      // element index -> group index
    std::vector<double> mass;               // per group (weighted form only)
    std::vector<double> conditional_mean;   // per group (weighted form only)
};

LevelSetPartition level_sets(std::span<const double> values);
LevelSetPartition level_sets(std::span<const double> values, std::span<const double> weights,
                             std::span<const double> targets);

// Exact population ECE of the spec's predictor: group by predictor value,
// then sum p*_i |E[Y | g = g_i] - g_i|.
double population_ece(const DiscreteDistributionSpec& spec);

// Exact ECE under the empirical measure: probabilities link.forward(logit),
// grouped by exact value, each group contributing (|G|/n)|mean(y in G) - value|.
double empirical_exact_ece(const BinaryPredictionSet& data, const LinkFunction& link);

// Indices m where | |g*_m - g_m| - |E[Y | g = g_m] - g_m| | > tol.
// Empty result <=> the population ECE is continuous at this predictor (up to tol).
std::vector<std::size_t> discontinuity_witnesses(const DiscreteDistributionSpec& spec,
                                                 double tol = 1e-9);

// Population ECE of the spec with predictor value at `index` moved by `delta`.
// Rejects a delta that leaves [0, 1] or lands exactly on another predictor value.
double perturbation_probe(const DiscreteDistributionSpec& spec, std::size_t index, double delta);

} // namespace calmet
