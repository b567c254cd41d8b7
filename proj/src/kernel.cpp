#include "calmet/kernel.hpp"

#include "calmet/errors.hpp"

#include <cmath>
#include <limits>

namespace calmet {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934; // 1/sqrt(2*pi)
constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406; // log(sqrt(2*pi))

} // namespace

NoiseKernel::NoiseKernel(Base base, double sigma) : base_(base), sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw precondition_error("NoiseKernel: sigma must be a positive finite real");
}

NoiseKernel NoiseKernel::gaussian(double sigma) { return NoiseKernel(Base::gaussian, sigma); }

NoiseKernel NoiseKernel::uniform(double sigma) { return NoiseKernel(Base::uniform, sigma); }

NoiseKernel NoiseKernel::make(const std::string& base_name, double sigma) {
    if (base_name == "gaussian") return gaussian(sigma);
    if (base_name == "uniform") return uniform(sigma);
    throw precondition_error("NoiseKernel: unknown base '" + base_name + "' (expected gaussian or uniform)");
}

const std::string& NoiseKernel::name() const {
    static const std::string g = "gaussian";
    static const std::string u = "uniform";
    return base_ == Base::gaussian ? g : u;
}

double NoiseKernel::density(double u) const {
    if (base_ == Base::gaussian) {
        const double z = u / sigma_;
        return kInvSqrt2Pi / sigma_ * std::exp(-0.5 * z * z);
    }
    return std::abs(u) <= support_halfwidth() ? 1.0 / sigma_ : 0.0;
}

double NoiseKernel::log_density(double u) const {
    if (base_ == Base::gaussian) {
        const double z = u / sigma_;
        return -0.5 * z * z - std::log(sigma_) - kLogSqrt2Pi;
    }
    return std::abs(u) <= support_halfwidth() ? -std::log(sigma_)
                                              : -std::numeric_limits<double>::infinity();
}

double NoiseKernel::sample(Rng& rng) const {
    if (base_ == Base::gaussian) return sigma_ * rng.normal();
    return sigma_ * (rng.uniform01() - 0.5);
}

double NoiseKernel::support_halfwidth() const {
    if (base_ == Base::gaussian) return std::numeric_limits<double>::infinity();
    return 0.5 * sigma_;
}

} // namespace calmet
