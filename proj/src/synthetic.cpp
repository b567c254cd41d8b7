#include "calmet/synthetic.hpp"

#include "calmet/errors.hpp"

#include <cmath>
#include <string>

namespace calmet {

TwoPointSample sample_two_point(std::size_t n, RandomSeed seed) {
    if (n < 1) throw precondition_error("sample_two_point: n must be at least 1");
    Rng rng(seed);
    TwoPointSample sample;
    sample.x.reserve(n);
    sample.y.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int y = static_cast<int>(rng.next() >> 63);
        sample.y.push_back(y);
        sample.x.push_back(y - 0.5);
    }
    return sample;
}

TwoPointLogitPredictor two_point_logit_predictor(double alpha) {
    if (!std::isfinite(alpha)) throw precondition_error("two_point_logit_predictor: alpha must be finite");
    return TwoPointLogitPredictor{alpha};
}

BinaryPredictionSet to_predictions(const TwoPointSample& sample, double alpha) {
    const TwoPointLogitPredictor h = two_point_logit_predictor(alpha);
    std::vector<double> logits;
    logits.reserve(sample.x.size());
    for (double x : sample.x) logits.push_back(h(x));
    return BinaryPredictionSet(std::move(logits), sample.y);
}

CounterexampleSample sample_counterexample(std::size_t n, RandomSeed seed) {
    if (n < 1) throw precondition_error("sample_counterexample: n must be at least 1");
    Rng rng(seed);
    CounterexampleSample sample;
    sample.x1.reserve(n);
    sample.x2.reserve(n);
    sample.y.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = rng.uniform01();
        const bool high = rng.uniform01() < x1;
        const double x2 = high ? 0.5 + 0.5 * rng.uniform01() : 0.5 * rng.uniform01();
        sample.x1.push_back(x1);
        sample.x2.push_back(x2);
        sample.y.push_back(x2 >= 0.5 ? 1 : 0);
    }
    return sample;
}

double PerturbedPredictor::upper(double z) const {
    const double offset = quarter_offset ? 0.25 : delta / 4.0;
    const double v = (std::floor(z / delta) + 1.0 - offset) * delta;
    return std::min(1.0, std::max(0.0, v));
}

double PerturbedPredictor::lower(double z) const {
    const double offset = quarter_offset ? 0.25 : delta / 4.0;
    const double v = (std::floor(z / delta) + offset) * delta;
    return std::min(1.0, std::max(0.0, v));
}

PerturbedPredictor perturbed_predictor(double delta, bool quarter_offset) {
    if (!(delta > 0.0) || !(delta <= 0.5))
        throw precondition_error("perturbed_predictor: delta must lie in (0, 0.5]");
    const double k = std::round(1.0 / delta);
    if (k < 2.0 || std::abs(delta * k - 1.0) > 1e-12)
        throw precondition_error("perturbed_predictor: delta = " + std::to_string(delta) +
                                 " is not the reciprocal of an integer k >= 2");
    return PerturbedPredictor{delta, quarter_offset};
}

BinaryPredictionSet to_predictions(const CounterexampleSample& sample, const LinkFunction& link,
                                   double tol) {
    return BinaryPredictionSet::from_probabilities(sample.x1, sample.y, link, tol);
}

BinaryPredictionSet to_predictions(const CounterexampleSample& sample,
                                   const PerturbedPredictor& predictor, const LinkFunction& link,
                                   double tol) {
    std::vector<double> confidence;
    confidence.reserve(sample.x1.size());
    for (std::size_t i = 0; i < sample.x1.size(); ++i)
        confidence.push_back(predictor(sample.x1[i], sample.x2[i]));
    return BinaryPredictionSet::from_probabilities(confidence, sample.y, link, tol);
}

} // namespace calmet
