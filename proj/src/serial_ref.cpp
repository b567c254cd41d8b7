#include "calmet/serial_ref.hpp"

#include "calmet/errors.hpp"

#include <algorithm>
#include <cmath>

namespace calmet::reference {

SmoothedEstimate ls_ece(const BinaryPredictionSet& data, const LinkFunction& link,
                        const NoiseKernel& kernel, std::size_t mc_samples, RandomSeed seed) {
    if (mc_samples < 1) throw precondition_error("ls_ece: mc_samples must be at least 1");

    const NwEvaluator eval(data, kernel);
    const std::size_t n = data.size();
    const auto logits = data.logits();
    const std::size_t chunks = (mc_samples + kMcChunkSize - 1) / kMcChunkSize;

    double sum = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        Rng rng(derive_seed(seed, c));
        const std::size_t begin = c * kMcChunkSize;
        const std::size_t end = std::min(begin + kMcChunkSize, mc_samples);
        double acc = 0.0;
        for (std::size_t s = begin; s < end; ++s) {
            const std::size_t i = rng.index(n);
            const double t = logits[i] + kernel.sample(rng);
            acc += std::abs(eval.conditional_mean(t) - link.forward(t));
        }
        sum += acc;
    }

    SmoothedEstimate est;
    est.value = sum / static_cast<double>(mc_samples);
    est.samples_used = mc_samples;
    est.sigma = kernel.sigma();
    est.kernel = kernel.name();
    est.seed = seed.value;
    est.chunk_size = kMcChunkSize;
    return est;
}

std::vector<double> batch_conditional_mean(const NwEvaluator& eval, std::span<const double> ts) {
    std::vector<double> out(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) out[k] = eval.conditional_mean(ts[k]);
    return out;
}

SmoothReliabilityCurve smooth_reliability(const BinaryPredictionSet& data,
                                          const LinkFunction& link, const NoiseKernel& kernel,
                                          std::size_t grid_size) {
    if (grid_size < 2) throw precondition_error("smooth_reliability: grid_size must be >= 2");

    const NwEvaluator eval(data, kernel);
    const double lo = eval.min_logit() - 4.0 * kernel.sigma();
    const double hi = eval.max_logit() + 4.0 * kernel.sigma();
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);

    SmoothReliabilityCurve curve;
    curve.t.resize(grid_size);
    curve.conf.resize(grid_size);
    curve.cond_mean.resize(grid_size);
    curve.density.resize(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) {
        const double t = k + 1 == grid_size ? hi : lo + static_cast<double>(k) * step;
        const double conf = link.forward(t);
        const NwEvaluator::Sums s = eval.weighted_sums(t);
        const auto [raw_total, raw_positives] = eval.density_sums(t);
        curve.t[k] = t;
        curve.conf[k] = conf;
        curve.cond_mean[k] = s.total == 0.0 ? conf : s.positives / s.total;
        curve.density[k] = raw_total == 0.0 ? 0.0 : link.inverse_derivative(conf) * raw_total;
    }
    return curve;
}

} // namespace calmet::reference
