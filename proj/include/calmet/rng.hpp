#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace calmet {

// Seed for every randomized operation. Same seed + same inputs => bit-identical
// results within one build.
struct RandomSeed {
    std::uint64_t value = 0;
};

// SplitMix64 finalizer, used to decorrelate derived sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic sub-stream seed for worker chunk / sweep row / repeat `stream`.
// Parallel and serial evaluations agree because both draw from the same
// per-stream generators regardless of scheduling.
inline RandomSeed derive_seed(RandomSeed seed, std::uint64_t stream) {
    return RandomSeed{splitmix64(seed.value ^ splitmix64(stream))};
}

// Deterministic counter-seeded generator with explicit, build-stable draw
// formulas (std::*_distribution is avoided because its algorithm is
// implementation-defined).
class Rng {
public:
    explicit Rng(RandomSeed seed) : gen_(seed.value) {}

    std::uint64_t next() { return gen_(); }

    // uniform on [0, 1) with 53-bit resolution
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller (two uniforms per draw, no caching)
    double normal() {
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53; // (0, 1]
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;         // [0, 1)
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // uniform index on [0, n), rejection-sampled so every index is equally likely
    std::size_t index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        std::uint64_t x, r;
        do {
            x = gen_();
            r = x % bound;
        } while (x - r > std::numeric_limits<std::uint64_t>::max() - (bound - 1));
        return static_cast<std::size_t>(r);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace calmet
