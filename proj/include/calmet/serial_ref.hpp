#pragma once

#include "calmet/ls_ece.hpp"

#include <span>
#include <vector>

namespace calmet::reference {

// Serial counterparts of the OpenMP kernels. Same per-chunk seed derivation
// and the same per-query evaluator, looped on one thread; results must match
// the parallel versions bit-for-bit. Used by tests and by the benchmark.

SmoothedEstimate ls_ece(const BinaryPredictionSet& data, const LinkFunction& link,
                        const NoiseKernel& kernel, std::size_t mc_samples, RandomSeed seed);

std::vector<double> batch_conditional_mean(const NwEvaluator& eval, std::span<const double> ts);

SmoothReliabilityCurve smooth_reliability(const BinaryPredictionSet& data,
                                          const LinkFunction& link, const NoiseKernel& kernel,
                                          std::size_t grid_size);

} // namespace calmet::reference
