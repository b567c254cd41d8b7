#include "calmet/link.hpp"

#include "calmet/errors.hpp"

#include <cmath>
#include <utility>

namespace calmet {

LinkFunction::LinkFunction(std::string name, Fn forward, Fn inverse, Fn inverse_derivative)
    : name_(std::move(name)),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      inverse_derivative_(std::move(inverse_derivative)) {
    if (!forward_ || !inverse_ || !inverse_derivative_)
        throw precondition_error("LinkFunction: all three maps must be provided");
}

const LinkFunction& LinkFunction::sigmoid() {
    static const LinkFunction link(
        "sigmoid",
        [](double z) {
            // evaluate through the shrinking tail so neither exp overflows
            if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
            const double e = std::exp(z);
            return e / (1.0 + e);
        },
        [](double p) { return std::log(p) - std::log1p(-p); },
        [](double p) { return 1.0 / (p * (1.0 - p)); });
    return link;
}

} // namespace calmet
