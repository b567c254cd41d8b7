#pragma once

#include "calmet/link.hpp"
#include "calmet/prediction_set.hpp"
#include "calmet/rng.hpp"

#include <cstddef>
#include <vector>

namespace calmet {

// Two-atom distribution: y ~ fair Bernoulli, x = y - 1/2. The textbook case
// where an arbitrarily small predictor perturbation splits a level set.
struct TwoPointSample {
    std::vector<double> x;  // each -0.5 or +0.5
    std::vector<int> y;     // y_i = x_i + 1/2
};

TwoPointSample sample_two_point(std::size_t n, RandomSeed seed);

// h(x) = alpha * x; composed with the sigmoid this predicts 1/2 -+ eps.
struct TwoPointLogitPredictor {
    double alpha;
    double operator()(double x) const { return alpha * x; }
};

TwoPointLogitPredictor two_point_logit_predictor(double alpha);

BinaryPredictionSet to_predictions(const TwoPointSample& sample, double alpha);

// Continuous counterexample: x1 ~ Uni[0,1]; x2 ~ Uni[0.5,1] with probability
// x1, else Uni[0,0.5); y = 1{x2 >= 0.5}. The predictor x1 is calibrated:
// P(Y=1 | X1=x1) = x1.
struct CounterexampleSample {
    std::vector<double> x1;
    std::vector<double> x2;
    std::vector<int> y;
};

CounterexampleSample sample_counterexample(std::size_t n, RandomSeed seed);

// Piecewise-constant perturbation of the predictor x1 that separates the
// x2 < 0.5 and x2 >= 0.5 populations into disjoint value sets while staying
// within delta of x1:
//   upper(z) = (floor(z/delta) + 1 - delta/4) * delta   (used when x2 < 0.5)
//   lower(z) = (floor(z/delta) + delta/4) * delta        (used when x2 >= 0.5)
// quarter_offset replaces the delta/4 inner offset with 1/4 (cell-proportional
// placement); both variants keep |value - z| < delta and the branches disjoint.
struct PerturbedPredictor {
    double delta;
    bool quarter_offset = false;

    double upper(double z) const;
    double lower(double z) const;
    double operator()(double x1, double x2) const { return x2 < 0.5 ? upper(x1) : lower(x1); }
};

// delta must equal 1/k for an integer k >= 2
PerturbedPredictor perturbed_predictor(double delta, bool quarter_offset = false);

// Predictions with confidence x1.
BinaryPredictionSet to_predictions(const CounterexampleSample& sample, const LinkFunction& link,
                                   double tol = kDefaultClampTol);

// Predictions with confidence g_delta(x1, x2).
BinaryPredictionSet to_predictions(const CounterexampleSample& sample,
                                   const PerturbedPredictor& predictor, const LinkFunction& link,
                                   double tol = kDefaultClampTol);

} // namespace calmet
