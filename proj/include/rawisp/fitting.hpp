/* Copyright 2026 The rawisp Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef RAWISP_FITTING_HPP_
#define RAWISP_FITTING_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rawisp/learnable_ops.hpp"

namespace rawisp {

// ---------------------------------------------------------------------------
// Offline maximum-likelihood fit of the Yeo-Johnson parameter.
// ---------------------------------------------------------------------------

// Gaussian profile log-likelihood of non-negative samples under the
// Yeo-Johnson transform:
//   LL(lambda) = -(n/2) ln(var(F(x))) + (lambda - 1) sum ln(x + 1)
// with the biased sample variance. Throws Error{kDegenerate} for fewer than
// two samples or zero variance after the transform.
double YeoJohnsonLogLikelihood(std::span<const double> samples, double lambda);

struct LambdaSearch {
  double lo = 1e-3;
  double hi = 3.0;
  double tolerance = 1e-4;
};

// Golden-section maximization of YeoJohnsonLogLikelihood on [lo, hi].
// Assumes the likelihood is unimodal on the interval.
double FitLambdaMle(std::span<const double> samples, LambdaSearch search = {});

// ---------------------------------------------------------------------------
// Gradient checking.
// ---------------------------------------------------------------------------

using ScalarFunction = std::function<double(std::span<const double>)>;

// Central differences (f(t + h e_k) - f(t - h e_k)) / 2h per coordinate.
// Throws Error{kEvaluation} if any evaluation is not finite.
std::vector<double> FiniteDiffGrad(const ScalarFunction& f,
                                   std::span<const double> theta, double h);
// Per-coordinate steps; `steps` must have the size of `theta`.
std::vector<double> FiniteDiffGrad(const ScalarFunction& f,
                                   std::span<const double> theta,
                                   std::span<const double> steps);

// |analytic - numeric| / max(|analytic|, |numeric|), 0 when both are 0.
double RelativeError(double analytic, double numeric);

struct GradCheckResult {
  TransformKind kind;
  double max_param_rel_error = 0.0;
  double max_input_rel_error = 0.0;
  std::size_t draws = 0;
  std::size_t skipped_points = 0;  // inputs too close to the domain boundary

  double max_rel_error() const {
    return max_param_rel_error > max_input_rel_error ? max_param_rel_error
                                                     : max_input_rel_error;
  }
};

// Compares analytic parameter and input gradients of the transform against
// central finite differences over `draws` random (input, parameter) pairs.
// The scalar checked is L = sum(upstream * F(x)).
GradCheckResult CheckTransformGradients(TransformKind kind, std::size_t draws,
                                        std::uint64_t seed);

// ---------------------------------------------------------------------------
// Toy joint training: logistic regression on transformed intensities.
// ---------------------------------------------------------------------------

struct LabeledSample {
  double dn;  // intensity in digital numbers
  int label;  // 0 or 1
};

struct ToyDataConfig {
  std::size_t samples_per_class = 500;
  // Per-class medians in DN; log(x + 1) is Gaussian around log(median + 1).
  double dark_median = 40.0;
  double bright_median = 120.0;
  double log_spread = 0.5;
  int bit_depth = 12;
};

// Seeded two-class generator of dark-tone intensities, clipped to the bit
// depth range. Identical (config, seed) gives identical samples.
std::vector<LabeledSample> GenerateToyData(const ToyDataConfig& config,
                                           std::uint64_t seed);

struct TrainConfig {
  double learning_rate = 3e-4;
  std::size_t iterations = 3000;
  std::uint64_t seed = 0;
  TransformKind kind = TransformKind::kYeoJohnson;
  double param_floor = 1e-4;
  // Overrides DefaultParams(kind) when set.
  std::optional<TransformParams> initial_params;
  int bit_depth = 12;
};

struct TraceRecord {
  std::size_t iteration;
  std::vector<double> params;  // transform parameters before this step
  double loss;                 // loss at those parameters
};

struct TrainTrace {
  TransformKind kind;
  std::vector<TraceRecord> records;
  double final_weight = 0.0;
  double final_bias = 0.0;
};

// theta - lr * grad, then every index in `constrained` is clamped to at least
// `floor`. Throws Error{kDivergence} for non-finite gradients.
std::vector<double> SgdStep(std::span<const double> params,
                            std::span<const double> grads, double learning_rate,
                            double floor,
                            std::span<const std::size_t> constrained);

// Indices of the parameters that must stay positive for `kind`.
std::vector<std::size_t> ConstrainedParams(TransformKind kind);

// Full-batch gradient descent on binary cross-entropy of
//   p = sigmoid(w * standardize(F(x)) + b)
// over (w, b, transform parameters). Gamma and Erf see x / (2^bits - 1),
// Yeo-Johnson sees DN. Throws Error{kDegenerate} if a class is missing and
// Error{kDivergence} naming the iteration on a non-finite loss.
TrainTrace TrainToy(std::span<const LabeledSample> data,
                    const TrainConfig& config);

}  // namespace rawisp

#endif  // RAWISP_FITTING_HPP_
