#pragma once

#include "calmet/rng.hpp"

#include <string>

namespace calmet {

// Law of the logit noise xi = sigma * R. The density doubles as the regression
// kernel; log_density is the primitive the kernel-sum core evaluates.
class NoiseKernel {
public:
    enum class Base { gaussian, uniform };

    static NoiseKernel gaussian(double sigma);
    // sigma * Uni([-1/2, 1/2])
    static NoiseKernel uniform(double sigma);
    // base_name is "gaussian" or "uniform"
    static NoiseKernel make(const std::string& base_name, double sigma);

    double sigma() const { return sigma_; }
    Base base() const { return base_; }
    const std::string& name() const;

    double density(double u) const;
    // -inf outside the support of a compactly supported base
    double log_density(double u) const;
    double sample(Rng& rng) const;

    bool compact_support() const { return base_ == Base::uniform; }
    // half-width of the support window; +inf for the gaussian base
    double support_halfwidth() const;

private:
    NoiseKernel(Base base, double sigma);

    Base base_;
    double sigma_;
};

} // namespace calmet
