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
#include "rawisp/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "random.hpp"
#include "rawisp/error.hpp"
#include "rawisp/raw_core.hpp"

namespace rawisp {

namespace {

void RequireSamples(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::kDegenerate,
                "log-likelihood needs at least two samples, got " +
                    std::to_string(samples.size()));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(std::isfinite(samples[i]) && samples[i] >= 0.0)) {
      std::ostringstream msg;
      msg << "sample " << i << " = " << samples[i] << " is not in [0, inf)";
      throw Error(ErrorCode::kDomain, msg.str());
    }
  }
}

double LogLikelihoodUnchecked(std::span<const double> samples, double lambda) {
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  double log_jacobian = 0.0;
  std::vector<double> y(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double l = std::log1p(samples[i]);
    y[i] = std::expm1(lambda * l) / lambda;
    sum += y[i];
    log_jacobian += l;
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  const double variance = ss / n;
  if (!(variance > 0.0)) {
    std::ostringstream msg;
    msg << "transformed samples have zero variance at lambda = " << lambda;
    throw Error(ErrorCode::kDegenerate, msg.str());
  }
  return -0.5 * n * std::log(variance) + (lambda - 1.0) * log_jacobian;
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

struct DrawRanges {
  double x_lo, x_hi;
  std::vector<std::pair<double, double>> params;
  bool bounded_below_at_zero;  // input domain is [0, inf)
};

DrawRanges RangesFor(TransformKind kind) {
  switch (kind) {
    case TransformKind::kGamma: return {0.0, 1.0, {{0.2, 3.0}}, true};
    case TransformKind::kErf:
      return {0.0, 1.0, {{-0.5, 1.5}, {0.2, 2.0}}, false};
    case TransformKind::kYeoJohnson: return {0.0, 4095.0, {{0.05, 2.0}}, true};
  }
  return {0.0, 1.0, {{0.2, 3.0}}, true};
}

}  // namespace

double YeoJohnsonLogLikelihood(std::span<const double> samples, double lambda) {
  RequireSamples(samples);
  if (!(std::isfinite(lambda) && lambda > 0.0)) {
    std::ostringstream msg;
    msg << "lambda must be a finite positive number, got " << lambda;
    throw Error(ErrorCode::kParameterDomain, msg.str());
  }
  return LogLikelihoodUnchecked(samples, lambda);
}

double FitLambdaMle(std::span<const double> samples, LambdaSearch search) {
  RequireSamples(samples);
  if (!(search.lo > 0.0 && search.hi > search.lo && search.tolerance > 0.0 &&
        std::isfinite(search.hi))) {
    std::ostringstream msg;
    msg << "invalid lambda search interval [" << search.lo << ", " << search.hi
        << "] with tolerance " << search.tolerance;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
  constexpr double kInvPhi = 0.6180339887498948482;  // (sqrt(5) - 1) / 2
  double a = search.lo;
  double b = search.hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = LogLikelihoodUnchecked(samples, c);
  double fd = LogLikelihoodUnchecked(samples, d);
  while (b - a > search.tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = LogLikelihoodUnchecked(samples, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = LogLikelihoodUnchecked(samples, d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> FiniteDiffGrad(const ScalarFunction& f,
                                   std::span<const double> theta, double h) {
  const std::vector<double> steps(theta.size(), h);
  return FiniteDiffGrad(f, theta, steps);
}

std::vector<double> FiniteDiffGrad(const ScalarFunction& f,
                                   std::span<const double> theta,
                                   std::span<const double> steps) {
  if (steps.size() != theta.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "finite-difference steps must match the parameter count");
  }
  std::vector<double> point(theta.begin(), theta.end());
  std::vector<double> grad(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double h = steps[k];
    if (!(h > 0.0 && std::isfinite(h))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "finite-difference step must be positive");
    }
    point[k] = theta[k] + h;
    const double plus = f(point);
    point[k] = theta[k] - h;
    const double minus = f(point);
    point[k] = theta[k];
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      std::ostringstream msg;
      msg << "non-finite evaluation at coordinate " << k << " (f(+h) = "
          << plus << ", f(-h) = " << minus << ")";
      throw Error(ErrorCode::kEvaluation, msg.str());
    }
    grad[k] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

double RelativeError(double analytic, double numeric) {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  if (scale == 0.0) return 0.0;
  return std::abs(analytic - numeric) / scale;
}

GradCheckResult CheckTransformGradients(TransformKind kind, std::size_t draws,
                                        std::uint64_t seed) {
  constexpr std::size_t kSide = 4;
  constexpr double kBoundaryExclusion = 1e-8;
  const DrawRanges ranges = RangesFor(kind);
  internal::Rng rng(seed);
  GradCheckResult result{kind};

  for (std::size_t draw = 0; draw < draws; ++draw) {
    Plane x(kSide, kSide);
    Plane upstream(kSide, kSide);
    for (double& v : x.values()) v = rng.Uniform(ranges.x_lo, ranges.x_hi);
    for (double& v : upstream.values()) v = rng.Uniform(0.5, 1.5);
    std::vector<double> theta;
    for (const auto& [lo, hi] : ranges.params) {
      theta.push_back(rng.Uniform(lo, hi));
    }
    const TransformParams params = ParamsFromVector(kind, theta);
    const GradRecord analytic = Backward(params, x, upstream);

    // Parameter gradients of L = sum(upstream * F(x; theta)).
    auto loss = [&](std::span<const double> t) {
      const Plane y = Forward(ParamsFromVector(kind, t), x);
      double sum = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        sum += upstream.values()[i] * y.values()[i];
      }
      return sum;
    };
    std::vector<double> param_steps;
    for (double t : theta) param_steps.push_back(1e-6 * std::max(1.0, std::abs(t)));
    const std::vector<double> numeric =
        FiniteDiffGrad(loss, theta, param_steps);
    for (std::size_t k = 0; k < theta.size(); ++k) {
      result.max_param_rel_error = std::max(
          result.max_param_rel_error,
          RelativeError(analytic.d_params[k], numeric[k]));
    }

    // Input gradients; the transform is point-wise so each pixel is checked
    // through its own term of L.
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xi = x.values()[i];
      double step = 1e-6 * std::max(1.0, std::abs(xi));
      if (ranges.bounded_below_at_zero) {
        if (xi < kBoundaryExclusion) {
          ++result.skipped_points;
          continue;
        }
        // Keep both probes well inside the domain.
        step = std::min(step, 1e-3 * xi);
      }
      const double up = upstream.values()[i];
      std::function<double(double)> pixel_value = [&](double v) {
        return ForwardScalar(params, v);
      };
      if (const auto* e = std::get_if<ErfParams>(&params)) {
        // Near saturation erf(z) is within a few ulps of +-1 and central
        // differences drown in rounding; difference erf(z) - sign instead,
        // with the sign taken from the unperturbed point.
        const double scale = std::numbers::sqrt2 * e->sigma;
        const bool upper = xi >= e->mu;
        pixel_value = [e, scale, upper](double v) {
          const double z = (v - e->mu) / scale;
          return upper ? -Erfc(z) : Erfc(-z);
        };
      }
      auto pixel_loss = [&](std::span<const double> v) {
        return up * pixel_value(v[0]);
      };
      const double point[] = {xi};
      const double steps[] = {step};
      const double fd = FiniteDiffGrad(pixel_loss, point, steps)[0];
      result.max_input_rel_error =
          std::max(result.max_input_rel_error,
                   RelativeError(analytic.d_input.values()[i], fd));
    }
    ++result.draws;
  }
  return result;
}

std::vector<LabeledSample> GenerateToyData(const ToyDataConfig& config,
                                           std::uint64_t seed) {
  if (config.samples_per_class == 0 || !(config.log_spread >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "toy data needs at least one sample per class and a "
                "non-negative spread");
  }
  const double max_v = MaxValueForBits(config.bit_depth);
  internal::Rng rng(seed);
  std::vector<LabeledSample> data;
  data.reserve(2 * config.samples_per_class);
  for (std::size_t i = 0; i < config.samples_per_class; ++i) {
    for (int label = 0; label < 2; ++label) {
      const double median =
          label == 0 ? config.dark_median : config.bright_median;
      const double v =
          (median + 1.0) * std::exp(config.log_spread * rng.Normal()) - 1.0;
      data.push_back({std::clamp(v, 0.0, max_v), label});
    }
  }
  return data;
}

std::vector<std::size_t> ConstrainedParams(TransformKind kind) {
  switch (kind) {
    case TransformKind::kGamma: return {0};
    case TransformKind::kErf: return {1};
    case TransformKind::kYeoJohnson: return {0};
  }
  return {};
}

std::vector<double> SgdStep(std::span<const double> params,
                            std::span<const double> grads, double learning_rate,
                            double floor,
                            std::span<const std::size_t> constrained) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "gradient count does not match parameter count");
  }
  std::vector<double> next(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (!std::isfinite(grads[k])) {
      std::ostringstream msg;
      msg << "non-finite gradient " << grads[k] << " for parameter " << k;
      throw Error(ErrorCode::kDivergence, msg.str());
    }
    next[k] = params[k] - learning_rate * grads[k];
    if (!std::isfinite(next[k])) {
      std::ostringstream msg;
      msg << "parameter " << k << " overflowed after the update";
      throw Error(ErrorCode::kDivergence, msg.str());
    }
  }
  for (std::size_t k : constrained) {
    if (k < next.size()) next[k] = std::max(next[k], floor);
  }
  return next;
}

TrainTrace TrainToy(std::span<const LabeledSample> data,
                    const TrainConfig& config) {
  if (!(config.learning_rate >= 0.0 && std::isfinite(config.learning_rate))) {
    throw Error(ErrorCode::kInvalidArgument,
                "learning rate must be finite and non-negative");
  }
  if (config.iterations == 0) {
    throw Error(ErrorCode::kInvalidArgument, "iterations must be at least 1");
  }
  if (!(config.param_floor > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "parameter floor must be positive");
  }
  const bool has_both_classes =
      std::any_of(data.begin(), data.end(),
                  [](const LabeledSample& s) { return s.label == 0; }) &&
      std::any_of(data.begin(), data.end(),
                  [](const LabeledSample& s) { return s.label == 1; });
  if (!has_both_classes) {
    throw Error(ErrorCode::kDegenerate, "training data must contain both classes");
  }

  const TransformKind kind = config.kind;
  const double input_scale = kind == TransformKind::kYeoJohnson
                                 ? 1.0
                                 : 1.0 / MaxValueForBits(config.bit_depth);
  const std::size_t n = data.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  Plane x(1, n);
  std::vector<double> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (data[i].label != 0 && data[i].label != 1) {
      throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
    x(0, i) = data[i].dn * input_scale;
    labels[i] = data[i].label;
  }

  TransformParams params = config.initial_params.value_or(DefaultParams(kind));
  if (KindOf(params) != kind) {
    throw Error(ErrorCode::kInvalidArgument,
                "initial parameters do not match the transform kind");
  }
  const std::vector<std::size_t> constrained = ConstrainedParams(kind);
  double weight = 1.0;
  double bias = 0.0;

  TrainTrace trace{kind, {}, 0.0, 0.0};
  trace.records.reserve(config.iterations);
  Plane standardized(1, n);
  Plane upstream(1, n);
  std::vector<double> g(n);

  for (std::size_t it = 0; it < config.iterations; ++it) {
    const Plane f = Forward(params, x);

    double mean = 0.0;
    for (double v : f.values()) mean += v;
    mean *= inv_n;
    double ss = 0.0;
    for (double v : f.values()) ss += (v - mean) * (v - mean);
    const double stddev = std::sqrt(ss * inv_n);
    if (!(stddev > 0.0 && std::isfinite(stddev))) {
      throw Error(ErrorCode::kDivergence,
                  "transformed intensities collapsed at iteration " +
                      std::to_string(it));
    }

    double loss = 0.0;
    double grad_w = 0.0;
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fh = (f(0, i) - mean) / stddev;
      standardized(0, i) = fh;
      const double z = weight * fh + bias;
      loss += Softplus(z) - labels[i] * z;
      g[i] = (Sigmoid(z) - labels[i]) * inv_n;
      grad_w += g[i] * fh;
      grad_b += g[i];
    }
    loss *= inv_n;
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergence,
                  "non-finite loss at iteration " + std::to_string(it));
    }
    std::vector<double> theta = ParamVector(params);
    trace.records.push_back({it, theta, loss});

    // Back through the standardization: with u = dL/dF_hat,
    // dL/dF = (u - mean(u) - F_hat * mean(u * F_hat)) / stddev.
    double u_mean = 0.0;
    double uf_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = weight * g[i];
      u_mean += u;
      uf_mean += u * standardized(0, i);
    }
    u_mean *= inv_n;
    uf_mean *= inv_n;
    for (std::size_t i = 0; i < n; ++i) {
      upstream(0, i) =
          (weight * g[i] - u_mean - standardized(0, i) * uf_mean) / stddev;
    }
    const GradRecord grad = Backward(params, x, upstream);

    try {
      theta = SgdStep(theta, grad.d_params, config.learning_rate,
                      config.param_floor, constrained);
    } catch (const Error& e) {
      throw Error(ErrorCode::kDivergence,
                  std::string(e.what()) + " at iteration " + std::to_string(it));
    }
    params = ParamsFromVector(kind, theta);
    weight -= config.learning_rate * grad_w;
    bias -= config.learning_rate * grad_b;
  }
  trace.final_weight = weight;
  trace.final_bias = bias;
  return trace;
}

}  // namespace rawisp
