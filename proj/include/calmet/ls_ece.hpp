#pragma once

#include "calmet/kernel.hpp"
#include "calmet/link.hpp"
#include "calmet/prediction_set.hpp"
#include "calmet/rng.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace calmet {

// Default Monte-Carlo sample count for the smoothed estimator.
inline constexpr std::size_t kDefaultMcSamples = 10000;

// Monte-Carlo samples per deterministically seeded worker chunk. Chunk c draws
// from derive_seed(seed, c), partial sums are combined in chunk order, so
// parallel and serial runs agree bit-for-bit at this fixed chunking.
inline constexpr std::size_t kMcChunkSize = 256;

// Kernel-sum core shared by the conditional mean, the smoothed densities and
// the Monte-Carlo estimator.
//
// Canonical evaluation order: samples sorted by ascending logit (stable by
// original index) and run-length collapsed over duplicate logits. Weights are
// exponentiated after subtracting the maximum log-weight; blocks whose shifted
// weights underflow to exactly +0.0 are skipped. Both transforms leave results
// bit-identical to the plain sorted-order element loop. For the uniform kernel
// every in-support weight is exactly 1.0 after the shift, so the conditional
// mean reduces to exact prefix counts, looked up in O(log n).
class NwEvaluator {
public:
    NwEvaluator(const BinaryPredictionSet& data, const NoiseKernel& kernel);

    struct Sums {
        double total;      // sum of shifted weights
        double positives;  // same restricted to label-1 samples
    };

    // Shifted-weight sums at logit t; conditional_mean = positives / total.
    Sums weighted_sums(double t) const;

    // Nadaraya-Watson estimate of E[Y | smoothed logit = t], in [0, 1].
    // Throws numeric_error when every kernel weight vanishes at t (possible
    // only for compactly supported kernels).
    double conditional_mean(double t) const;

    // ((1/n) sum_i p_xi(t - h_i), same over y_i = 1); plain sorted-order sums.
    std::pair<double, double> density_sums(double t) const;

    double min_logit() const { return unique_h_.front(); }
    double max_logit() const { return unique_h_.back(); }
    const NoiseKernel& kernel() const { return kernel_; }
    std::size_t sample_count() const { return n_; }

private:
    Sums gaussian_sums(double t) const;
    Sums uniform_sums(double t) const;
    // index range of unique logits inside the uniform support window around t
    std::pair<std::size_t, std::size_t> uniform_window(double t) const;

    NoiseKernel kernel_;
    std::size_t n_;
    std::vector<double> unique_h_;         // ascending distinct logits
    std::vector<std::size_t> count_;       // run length per distinct logit
    std::vector<std::size_t> count1_;      // label-1 run length per distinct logit
    std::vector<std::size_t> cum_count_;   // prefix sums (size blocks + 1)
    std::vector<std::size_t> cum_count1_;
};

// Replay record of one smoothed-ECE estimate.
struct SmoothedEstimate {
    double value = 0.0;            // in [0, 1]
    std::size_t samples_used = 0;  // Monte-Carlo draws
    double sigma = 0.0;
    std::string kernel;
    std::uint64_t seed = 0;
    std::size_t chunk_size = 0;    // worker chunking used for seed derivation
};

// Monte-Carlo estimate of E_{i,xi} |E[Y | T = h_i + xi] - rho(h_i + xi)|:
// draws (index, noise) jointly per sample, smoothed logit t = h_i + xi, and
// averages |conditional mean - link.forward(t)|. Deterministic given seed.
SmoothedEstimate ls_ece(const BinaryPredictionSet& data, const LinkFunction& link,
                        const NoiseKernel& kernel, std::size_t mc_samples, RandomSeed seed);

// Densities of the smoothed confidence rho(T) evaluated at probability point
// rho(t), Jacobian included: returns (p_That, p_That_y1).
std::pair<double, double> smoothed_density(double t, const BinaryPredictionSet& data,
                                           const NoiseKernel& kernel, const LinkFunction& link);

// Single-query convenience wrapper around NwEvaluator.
double nw_conditional_mean(double t, const BinaryPredictionSet& data, const NoiseKernel& kernel);

// Smoothed reliability curve on an even logit grid over
// [min h - 4*sigma, max h + 4*sigma]. Where the smoothed density vanishes
// (possible for compactly supported kernels) the curve reports cond_mean =
// conf: such points carry no calibration-error mass.
struct SmoothReliabilityCurve {
    std::vector<double> t;          // logit grid, strictly increasing
    std::vector<double> conf;       // rho(t)
    std::vector<double> cond_mean;  // E[Y | T = t], in [0, 1]
    std::vector<double> density;    // p_That at rho(t), Jacobian included
};

SmoothReliabilityCurve smooth_reliability(const BinaryPredictionSet& data,
                                          const LinkFunction& link, const NoiseKernel& kernel,
                                          std::size_t grid_size);

// OpenMP-parallel batch of conditional means (one independent query per entry).
std::vector<double> batch_conditional_mean(const NwEvaluator& eval, std::span<const double> ts);

} // namespace calmet
