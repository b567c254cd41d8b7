// Timing harness comparing the OpenMP kernels against the serial reference
// implementations, and verifying they agree bit-for-bit while at it.
//
//   ./calmet-bench [n] [mc_samples]

#include "calmet/ls_ece.hpp"
#include "calmet/serial_ref.hpp"
#include "calmet/synthetic.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

using namespace calmet;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F> double time_call(F&& f) {
    const double start = now_seconds();
    f();
    return now_seconds() - start;
}

void row(const char* name, double serial_s, double parallel_s, bool bitwise_equal) {
    std::printf("%-34s %10.3f s %10.3f s %7.2fx   %s\n", name, serial_s, parallel_s,
                serial_s / parallel_s, bitwise_equal ? "bitwise equal" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
    const std::size_t mc = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20000;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled in this build\n");
#endif
    std::printf("n = %zu samples, %zu Monte-Carlo draws\n\n", n, mc);
    std::printf("%-34s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

    const LinkFunction& link = LinkFunction::sigmoid();
    const auto data = to_predictions(sample_counterexample(n, RandomSeed{1}), link);
    const auto atoms = to_predictions(sample_two_point(n, RandomSeed{2}), 1e-3);

    {
        const NoiseKernel kernel = NoiseKernel::gaussian(0.05);
        SmoothedEstimate serial_est, parallel_est;
        const double ts = time_call(
            [&] { serial_est = reference::ls_ece(data, link, kernel, mc, RandomSeed{3}); });
        const double tp =
            time_call([&] { parallel_est = ls_ece(data, link, kernel, mc, RandomSeed{3}); });
        row("ls_ece gaussian (spread logits)", ts, tp, serial_est.value == parallel_est.value);
    }
    {
        const NoiseKernel kernel = NoiseKernel::gaussian(0.1);
        SmoothedEstimate serial_est, parallel_est;
        const double ts = time_call(
            [&] { serial_est = reference::ls_ece(atoms, link, kernel, mc, RandomSeed{4}); });
        const double tp =
            time_call([&] { parallel_est = ls_ece(atoms, link, kernel, mc, RandomSeed{4}); });
        row("ls_ece gaussian (two atoms)", ts, tp, serial_est.value == parallel_est.value);
    }
    {
        const NoiseKernel kernel = NoiseKernel::uniform(0.05);
        SmoothedEstimate serial_est, parallel_est;
        const double ts = time_call(
            [&] { serial_est = reference::ls_ece(data, link, kernel, mc, RandomSeed{5}); });
        const double tp =
            time_call([&] { parallel_est = ls_ece(data, link, kernel, mc, RandomSeed{5}); });
        row("ls_ece uniform (prefix counts)", ts, tp, serial_est.value == parallel_est.value);
    }
    {
        const NoiseKernel kernel = NoiseKernel::gaussian(0.05);
        const NwEvaluator eval(data, kernel);
        std::vector<double> ts_grid(mc);
        for (std::size_t k = 0; k < ts_grid.size(); ++k)
            ts_grid[k] = -8.0 + 16.0 * static_cast<double>(k) / static_cast<double>(mc - 1);
        std::vector<double> serial_out, parallel_out;
        const double ts =
            time_call([&] { serial_out = reference::batch_conditional_mean(eval, ts_grid); });
        const double tp = time_call([&] { parallel_out = batch_conditional_mean(eval, ts_grid); });
        row("batch conditional mean (grid)", ts, tp, serial_out == parallel_out);
    }
    {
        const NoiseKernel kernel = NoiseKernel::gaussian(0.1);
        SmoothReliabilityCurve serial_curve, parallel_curve;
        const double ts = time_call(
            [&] { serial_curve = reference::smooth_reliability(data, link, kernel, 2001); });
        const double tp =
            time_call([&] { parallel_curve = smooth_reliability(data, link, kernel, 2001); });
        const bool equal = serial_curve.cond_mean == parallel_curve.cond_mean &&
                           serial_curve.density == parallel_curve.density;
        row("smooth reliability curve", ts, tp, equal);
    }
    return 0;
}
