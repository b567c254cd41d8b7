#include "calmet/exact_ece.hpp"

#include "calmet/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>

namespace calmet {

namespace {

// Grouping key: the raw bit pattern, with -0.0 folded into +0.0 so the two
// representations of zero land in one group.
std::uint64_t value_key(double v) {
    if (v == 0.0) v = 0.0;
    return std::bit_cast<std::uint64_t>(v);
}

LevelSetPartition partition_by_value(std::span<const double> values) {
    LevelSetPartition part;
    part.group_of.resize(values.size());
    std::unordered_map<std::uint64_t, std::size_t> group_index;
    group_index.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::isnan(values[i]))
            throw precondition_error("level_sets: NaN value at index " + std::to_string(i));
        auto [it, inserted] = group_index.try_emplace(value_key(values[i]), part.groups.size());
        if (inserted) part.groups.push_back(LevelSet{values[i], {}});
        part.groups[it->second].members.push_back(i);
        part.group_of[i] = it->second;
    }
    return part;
}

void check_unit_range(std::span<const double> vals, const char* what) {
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (!(vals[i] >= 0.0) || !(vals[i] <= 1.0))
            throw precondition_error(std::string("DiscreteDistributionSpec: ") + what +
                                     " outside [0, 1] at index " + std::to_string(i));
}

} // namespace

DiscreteDistributionSpec::DiscreteDistributionSpec(std::vector<double> mass,
                                                   std::vector<double> true_conditional,
                                                   std::vector<double> predictor)
    : mass_(std::move(mass)),
      true_conditional_(std::move(true_conditional)),
      predictor_(std::move(predictor)) {
    if (mass_.size() != true_conditional_.size() || mass_.size() != predictor_.size())
        throw precondition_error("DiscreteDistributionSpec: field lengths differ");
    if (mass_.empty()) throw precondition_error("DiscreteDistributionSpec: empty support");
    double total = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        if (!(mass_[i] > 0.0) || !std::isfinite(mass_[i]))
            throw precondition_error("DiscreteDistributionSpec: mass at index " +
                                     std::to_string(i) + " is not strictly positive");
        total += mass_[i];
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw precondition_error("DiscreteDistributionSpec: masses sum to " +
                                 std::to_string(total) + ", not 1");
    check_unit_range(true_conditional_, "true_conditional");
    check_unit_range(predictor_, "predictor");
}

LevelSetPartition level_sets(std::span<const double> values) {
    if (values.empty()) throw precondition_error("level_sets: empty input");
    return partition_by_value(values);
}

LevelSetPartition level_sets(std::span<const double> values, std::span<const double> weights,
                             std::span<const double> targets) {
    if (values.size() != weights.size() || values.size() != targets.size())
        throw precondition_error("level_sets: values, weights, targets differ in length");
    LevelSetPartition part = level_sets(values);
    part.mass.assign(part.groups.size(), 0.0);
    std::vector<double> weighted_target(part.groups.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t g = part.group_of[i];
        part.mass[g] += weights[i];
        weighted_target[g] += weights[i] * targets[i];
    }
    part.conditional_mean.resize(part.groups.size());
    for (std::size_t g = 0; g < part.groups.size(); ++g)
        part.conditional_mean[g] = weighted_target[g] / part.mass[g];
    return part;
}

double population_ece(const DiscreteDistributionSpec& spec) {
    const LevelSetPartition part =
        level_sets(spec.predictor(), spec.mass(), spec.true_conditional());
    double ece = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double cond = part.conditional_mean[part.group_of[i]];
        ece += spec.mass()[i] * std::abs(cond - spec.predictor()[i]);
    }
    return ece;
}

double empirical_exact_ece(const BinaryPredictionSet& data, const LinkFunction& link) {
    const std::size_t n = data.size();
    std::vector<double> probs;
    probs.reserve(n);
    for (double h : data.logits()) probs.push_back(link.forward(h));

    const LevelSetPartition part = level_sets(probs);
    double ece = 0.0;
    for (const LevelSet& group : part.groups) {
        std::size_t positives = 0;
        for (std::size_t i : group.members) positives += data.labels()[i] == 1;
        const double mean_label =
            static_cast<double>(positives) / static_cast<double>(group.members.size());
        ece += static_cast<double>(group.members.size()) / static_cast<double>(n) *
               std::abs(mean_label - group.value);
    }
    return ece;
}

std::vector<std::size_t> discontinuity_witnesses(const DiscreteDistributionSpec& spec,
                                                 double tol) {
    if (!(tol > 0.0)) throw precondition_error("discontinuity_witnesses: tol must be positive");
    const LevelSetPartition part =
        level_sets(spec.predictor(), spec.mass(), spec.true_conditional());
    std::vector<std::size_t> witnesses;
    for (std::size_t m = 0; m < spec.size(); ++m) {
        const double direct = std::abs(spec.true_conditional()[m] - spec.predictor()[m]);
        const double grouped =
            std::abs(part.conditional_mean[part.group_of[m]] - spec.predictor()[m]);
        if (std::abs(direct - grouped) > tol) witnesses.push_back(m);
    }
    return witnesses;
}

double perturbation_probe(const DiscreteDistributionSpec& spec, std::size_t index, double delta) {
    if (index >= spec.size()) throw precondition_error("perturbation_probe: index out of range");
    if (std::isnan(delta)) throw precondition_error("perturbation_probe: delta is NaN");
    const double moved = spec.predictor()[index] + delta;
    if (!(moved >= 0.0) || !(moved <= 1.0))
        throw precondition_error("perturbation_probe: perturbed value " + std::to_string(moved) +
                                 " leaves [0, 1]");
    for (std::size_t j = 0; j < spec.size(); ++j)
        if (j != index && spec.predictor()[j] == moved)
            throw precondition_error(
                "perturbation_probe: perturbed value collides with predictor value at index " +
                std::to_string(j));
    std::vector<double> predictor(spec.predictor().begin(), spec.predictor().end());
    predictor[index] = moved;
    return population_ece(DiscreteDistributionSpec(
        {spec.mass().begin(), spec.mass().end()},
        {spec.true_conditional().begin(), spec.true_conditional().end()}, std::move(predictor)));
}

} // namespace calmet
