#include "calmet/experiments.hpp"

#include "calmet/binned_ece.hpp"
#include "calmet/errors.hpp"
#include "calmet/exact_ece.hpp"
#include "calmet/synthetic.hpp"

#include <cmath>
#include <string>

namespace calmet {

namespace {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0; // population standard deviation
};

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    for (double v : values) out.mean += v;
    out.mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size()));
    return out;
}

void check_bins(const SweepOptions& options) {
    if (options.bins.empty()) throw precondition_error("sweep: empty bin list");
    for (int m : options.bins)
        if (m < 1) throw precondition_error("sweep: bin counts must be at least 1");
    if (!options.sigma_override.empty() &&
        options.sigma_override.size() != options.bins.size())
        throw precondition_error("sweep: sigma override must pair one sigma per bin count");
    if (options.mc_samples < 1) throw precondition_error("sweep: mc_samples must be at least 1");
}

BinaryPredictionSet sample_predictions(SyntheticDistribution dist, std::size_t n, RandomSeed seed,
                                       double alpha, double clamp_tol) {
    if (dist == SyntheticDistribution::two_point)
        return to_predictions(sample_two_point(n, seed), alpha);
    return to_predictions(sample_counterexample(n, seed), LinkFunction::sigmoid(), clamp_tol);
}

} // namespace

SyntheticDistribution parse_distribution(const std::string& name) {
    if (name == "two-point") return SyntheticDistribution::two_point;
    if (name == "counterexample") return SyntheticDistribution::counterexample;
    throw precondition_error("unknown distribution '" + name +
                             "' (expected two-point or counterexample)");
}

std::vector<SweepRow> run_sweep(const BinaryPredictionSet& data, const std::string& model,
                                const SweepOptions& options) {
    check_bins(options);
    const LinkFunction& link = LinkFunction::sigmoid();

    std::vector<SweepRow> rows;
    rows.reserve(options.bins.size());
    for (std::size_t k = 0; k < options.bins.size(); ++k) {
        const int m = options.bins[k];
        SweepRow row;
        row.model = model;
        row.bins = m;
        row.sigma = options.sigma_override.empty() ? 1.0 / static_cast<double>(m)
                                                   : options.sigma_override[k];
        row.binned_ece = binned_ece(data, link, BinningScheme::uniform(static_cast<std::size_t>(m)));
        const NoiseKernel kernel = options.kernel == NoiseKernel::Base::gaussian
                                       ? NoiseKernel::gaussian(row.sigma)
                                       : NoiseKernel::uniform(row.sigma);
        row.ls_ece = ls_ece(data, link, kernel, options.mc_samples,
                            derive_seed(options.seed, static_cast<std::uint64_t>(m)))
                         .value;
        rows.push_back(std::move(row));
    }
    return rows;
}

ComparisonResult run_comparison(const std::vector<ComparisonInput>& inputs,
                                const SweepOptions& options,
                                const std::map<std::string, double>* external_smece) {
    if (inputs.empty()) throw precondition_error("comparison: need at least one input");
    check_bins(options);

    // every model runs under the same per-row sub-seeds (common random
    // numbers), so duplicated inputs produce exactly zero spread
    std::vector<std::vector<SweepRow>> sweeps;
    sweeps.reserve(inputs.size());
    for (const ComparisonInput& input : inputs)
        sweeps.push_back(run_sweep(input.data, input.model, options));

    ComparisonResult result;
    if (external_smece) {
        for (const auto& input : inputs)
            if (!external_smece->count(input.model))
                result.models_without_smece.push_back(input.model);
    }

    for (std::size_t k = 0; k < options.bins.size(); ++k) {
        ComparisonRow row;
        row.bins = options.bins[k];
        row.sigma = sweeps.front()[k].sigma;
        row.n_models = static_cast<int>(inputs.size());

        std::vector<double> ls_diffs, smece_diffs;
        for (std::size_t j = 0; j < inputs.size(); ++j) {
            const SweepRow& s = sweeps[j][k];
            ls_diffs.push_back(std::abs(s.binned_ece - s.ls_ece));
            if (external_smece) {
                const auto it = external_smece->find(inputs[j].model);
                if (it != external_smece->end())
                    smece_diffs.push_back(std::abs(s.binned_ece - it->second));
            }
        }
        const MeanStd ls = mean_std(ls_diffs);
        row.mean_abs_diff_ls = ls.mean;
        row.std_abs_diff_ls = ls.std;
        if (!smece_diffs.empty()) {
            const MeanStd sm = mean_std(smece_diffs);
            row.mean_abs_diff_smece = sm.mean;
            row.std_abs_diff_smece = sm.std;
        }
        result.rows.push_back(row);
    }
    return result;
}

std::vector<ConsistencyRow> run_consistency(const ConsistencyOptions& options) {
    if (options.n_list.empty()) throw precondition_error("consistency: empty n list");
    for (std::size_t k = 1; k < options.n_list.size(); ++k)
        if (options.n_list[k] <= options.n_list[k - 1])
            throw precondition_error("consistency: n list must be strictly increasing");
    if (options.repeats < 5) throw precondition_error("consistency: need at least 5 repeats");
    if (!(options.sigma > 0.0)) throw precondition_error("consistency: sigma must be positive");

    const LinkFunction& link = LinkFunction::sigmoid();
    const NoiseKernel kernel = options.kernel == NoiseKernel::Base::gaussian
                                   ? NoiseKernel::gaussian(options.sigma)
                                   : NoiseKernel::uniform(options.sigma);

    const RandomSeed ref_seed{kConsistencyReferenceSeed};
    const BinaryPredictionSet ref_data = sample_predictions(
        options.dist, options.reference_n, ref_seed, options.alpha, options.clamp_tol);
    const double reference =
        ls_ece(ref_data, link, kernel, options.mc_samples, derive_seed(ref_seed, 1)).value;

    std::vector<ConsistencyRow> rows;
    rows.reserve(options.n_list.size());
    for (std::size_t k = 0; k < options.n_list.size(); ++k) {
        const std::size_t n = options.n_list[k];
        std::vector<double> errors;
        errors.reserve(options.repeats);
        for (std::size_t r = 0; r < options.repeats; ++r) {
            const RandomSeed run_seed =
                derive_seed(derive_seed(options.seed, static_cast<std::uint64_t>(n)), r + 1);
            const BinaryPredictionSet data =
                sample_predictions(options.dist, n, run_seed, options.alpha, options.clamp_tol);
            const double value =
                ls_ece(data, link, kernel, options.mc_samples, derive_seed(run_seed, 1)).value;
            errors.push_back(std::abs(value - reference));
        }
        const MeanStd stats = mean_std(errors);
        rows.push_back(ConsistencyRow{n, stats.mean, stats.std, reference});
    }
    return rows;
}

std::vector<SigmaLimitRow> run_sigma_limit(const SigmaLimitOptions& options) {
    if (options.dist == SyntheticDistribution::two_point)
        throw precondition_error(
            "sigma-limit: the two-point distribution is rejected; its logit law is atomic, "
            "so the shrinking-noise limit requires a distribution with continuous conditional "
            "logit densities (use counterexample)");
    if (options.sigma_list.empty()) throw precondition_error("sigma-limit: empty sigma list");
    for (double s : options.sigma_list)
        if (!(s > 0.0)) throw precondition_error("sigma-limit: sigmas must be positive");
    for (std::size_t k = 1; k < options.sigma_list.size(); ++k)
        if (options.sigma_list[k] >= options.sigma_list[k - 1])
            throw precondition_error("sigma-limit: sigma list must be strictly decreasing");
    if (options.ref_bins < 1) throw precondition_error("sigma-limit: ref_bins must be >= 1");

    const LinkFunction& link = LinkFunction::sigmoid();
    const BinaryPredictionSet data = to_predictions(
        sample_counterexample(options.n, options.seed), link, options.clamp_tol);

    const double exact_grouped = empirical_exact_ece(data, link);
    const double binned_reference =
        binned_ece(data, link, BinningScheme::uniform(options.ref_bins));

    std::vector<SigmaLimitRow> rows;
    rows.reserve(options.sigma_list.size());
    for (std::size_t k = 0; k < options.sigma_list.size(); ++k) {
        const double sigma = options.sigma_list[k];
        const NoiseKernel kernel = options.kernel == NoiseKernel::Base::gaussian
                                       ? NoiseKernel::gaussian(sigma)
                                       : NoiseKernel::uniform(sigma);
        const double value =
            ls_ece(data, link, kernel, options.mc_samples, derive_seed(options.seed, k + 1)).value;
        rows.push_back(SigmaLimitRow{sigma, value, exact_grouped, binned_reference});
    }
    return rows;
}

} // namespace calmet
