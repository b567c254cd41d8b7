#pragma once

#include <functional>
#include <string>

namespace calmet {

// Strictly increasing map between logit space and probability space, with the
// inverse and inverse-derivative needed by the smoothed densities.
class LinkFunction {
public:
    using Fn = std::function<double(double)>;

    LinkFunction(std::string name, Fn forward, Fn inverse, Fn inverse_derivative);

    // The logistic sigmoid, the default link everywhere in this project.
    static const LinkFunction& sigmoid();

    double forward(double z) const { return forward_(z); }
    double inverse(double p) const { return inverse_(p); }
    double inverse_derivative(double p) const { return inverse_derivative_(p); }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    Fn forward_;
    Fn inverse_;
    Fn inverse_derivative_;
};

} // namespace calmet
