#include "calmet/ls_ece.hpp"

#include "calmet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

namespace calmet {

namespace {

// exp(x) underflows to exactly +0.0 for x below this; skipped terms therefore
// leave the accumulators bit-identical.
constexpr double kExpUnderflow = -747.0;

} // namespace

NwEvaluator::NwEvaluator(const BinaryPredictionSet& data, const NoiseKernel& kernel)
    : kernel_(kernel), n_(data.size()) {
    std::vector<std::size_t> order(n_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data.logits()[a] < data.logits()[b];
    });

    cum_count_.push_back(0);
    cum_count1_.push_back(0);
    for (std::size_t r = 0; r < n_; ++r) {
        const double h = data.logits()[order[r]];
        const std::size_t y1 = data.labels()[order[r]] == 1;
        if (unique_h_.empty() || unique_h_.back() != h) {
            unique_h_.push_back(h);
            count_.push_back(0);
            count1_.push_back(0);
        }
        ++count_.back();
        count1_.back() += y1;
    }
    for (std::size_t b = 0; b < unique_h_.size(); ++b) {
        cum_count_.push_back(cum_count_.back() + count_[b]);
        cum_count1_.push_back(cum_count1_.back() + count1_[b]);
    }
}

NwEvaluator::Sums NwEvaluator::gaussian_sums(double t) const {
    const double sigma = kernel_.sigma();
    const double inv2s = 1.0 / (2.0 * sigma * sigma);
    const auto q_of = [&](double h) {
        const double d = t - h;
        return d * d * inv2s;
    };

    // nearest distinct logit carries the maximum log-weight
    const auto split = std::lower_bound(unique_h_.begin(), unique_h_.end(), t);
    double qmin = std::numeric_limits<double>::infinity();
    if (split != unique_h_.end()) qmin = q_of(*split);
    if (split != unique_h_.begin()) qmin = std::min(qmin, q_of(*(split - 1)));
    // t so far out that even the nearest squared distance overflows
    if (!std::isfinite(qmin)) return {0.0, 0.0};

    // conservative superset of the blocks whose weights survive underflow
    const double radius = std::sqrt((qmin - kExpUnderflow + 1.0) / inv2s) * 1.0000001;
    const std::size_t lo =
        std::lower_bound(unique_h_.begin(), unique_h_.end(), t - radius) - unique_h_.begin();
    const std::size_t hi =
        std::upper_bound(unique_h_.begin(), unique_h_.end(), t + radius) - unique_h_.begin();

    double total = 0.0;
    double positives = 0.0;
    for (std::size_t b = lo; b < hi; ++b) {
        const double arg = qmin - q_of(unique_h_[b]);
        if (arg < kExpUnderflow) continue;
        const double w = std::exp(arg);
        for (std::size_t k = count_[b]; k--;) total += w;
        for (std::size_t k = count1_[b]; k--;) positives += w;
    }
    return {total, positives};
}

std::pair<std::size_t, std::size_t> NwEvaluator::uniform_window(double t) const {
    const double hw = kernel_.support_halfwidth();
    // t - h decreases along the ascending logits, so both membership bounds
    // are monotone predicates over the same subtraction log_density performs
    const auto lo = std::partition_point(unique_h_.begin(), unique_h_.end(),
                                         [&](double h) { return t - h > hw; });
    const auto hi = std::partition_point(lo, unique_h_.end(),
                                         [&](double h) { return t - h >= -hw; });
    return {static_cast<std::size_t>(lo - unique_h_.begin()),
            static_cast<std::size_t>(hi - unique_h_.begin())};
}

NwEvaluator::Sums NwEvaluator::uniform_sums(double t) const {
    const auto [lo, hi] = uniform_window(t);
    // every in-support weight is exp(0) = 1.0, so the sums are exact counts
    const std::size_t count = cum_count_[hi] - cum_count_[lo];
    const std::size_t count1 = cum_count1_[hi] - cum_count1_[lo];
    return {static_cast<double>(count), static_cast<double>(count1)};
}

NwEvaluator::Sums NwEvaluator::weighted_sums(double t) const {
    if (!std::isfinite(t)) throw precondition_error("NwEvaluator: query logit must be finite");
    return kernel_.base() == NoiseKernel::Base::gaussian ? gaussian_sums(t) : uniform_sums(t);
}

double NwEvaluator::conditional_mean(double t) const {
    const Sums s = weighted_sums(t);
    if (s.total == 0.0)
        throw numeric_error("nw_conditional_mean: all kernel weights vanished at t = " +
                            std::to_string(t));
    return s.positives / s.total;
}

std::pair<double, double> NwEvaluator::density_sums(double t) const {
    if (!std::isfinite(t)) throw precondition_error("NwEvaluator: query logit must be finite");
    double total = 0.0;
    double positives = 0.0;
    std::size_t lo = 0;
    std::size_t hi = unique_h_.size();
    if (kernel_.base() == NoiseKernel::Base::uniform) std::tie(lo, hi) = uniform_window(t);
    for (std::size_t b = lo; b < hi; ++b) {
        const double w = kernel_.density(t - unique_h_[b]);
        if (w == 0.0) continue;
        for (std::size_t k = count_[b]; k--;) total += w;
        for (std::size_t k = count1_[b]; k--;) positives += w;
    }
    const double nd = static_cast<double>(n_);
    return {total / nd, positives / nd};
}

SmoothedEstimate ls_ece(const BinaryPredictionSet& data, const LinkFunction& link,
                        const NoiseKernel& kernel, std::size_t mc_samples, RandomSeed seed) {
    if (mc_samples < 1) throw precondition_error("ls_ece: mc_samples must be at least 1");

    const NwEvaluator eval(data, kernel);
    const std::size_t n = data.size();
    const auto logits = data.logits();
    const std::size_t chunks = (mc_samples + kMcChunkSize - 1) / kMcChunkSize;

    std::vector<double> partial(chunks, 0.0);
    std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < chunks; ++c) {
        try {
            Rng rng(derive_seed(seed, c));
            const std::size_t begin = c * kMcChunkSize;
            const std::size_t end = std::min(begin + kMcChunkSize, mc_samples);
            double acc = 0.0;
            for (std::size_t s = begin; s < end; ++s) {
                const std::size_t i = rng.index(n);
                const double t = logits[i] + kernel.sample(rng);
                acc += std::abs(eval.conditional_mean(t) - link.forward(t));
            }
            partial[c] = acc;
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    double sum = 0.0;
    for (double p : partial) sum += p;

    SmoothedEstimate est;
    est.value = sum / static_cast<double>(mc_samples);
    est.samples_used = mc_samples;
    est.sigma = kernel.sigma();
    est.kernel = kernel.name();
    est.seed = seed.value;
    est.chunk_size = kMcChunkSize;
    return est;
}

std::pair<double, double> smoothed_density(double t, const BinaryPredictionSet& data,
                                           const NoiseKernel& kernel, const LinkFunction& link) {
    const NwEvaluator eval(data, kernel);
    const auto [raw_total, raw_positives] = eval.density_sums(t);
    if (raw_total == 0.0) return {0.0, 0.0};
    const double jacobian = link.inverse_derivative(link.forward(t));
    return {jacobian * raw_total, jacobian * raw_positives};
}

double nw_conditional_mean(double t, const BinaryPredictionSet& data, const NoiseKernel& kernel) {
    return NwEvaluator(data, kernel).conditional_mean(t);
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

#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < grid_size; ++k) {
        const double t = k + 1 == grid_size ? hi : lo + static_cast<double>(k) * step;
        const double conf = link.forward(t);
        const NwEvaluator::Sums s = eval.weighted_sums(t);
        const auto [raw_total, raw_positives] = eval.density_sums(t);
        curve.t[k] = t;
        curve.conf[k] = conf;
        curve.cond_mean[k] = s.total == 0.0 ? conf : s.positives / s.total;
        curve.density[k] =
            raw_total == 0.0 ? 0.0 : link.inverse_derivative(conf) * raw_total;
    }
    return curve;
}

std::vector<double> batch_conditional_mean(const NwEvaluator& eval, std::span<const double> ts) {
    std::vector<double> out(ts.size());
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t k = 0; k < ts.size(); ++k) {
        try {
            out[k] = eval.conditional_mean(ts[k]);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace calmet
