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
#include "rawisp/learnable_ops.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "rawisp/error.hpp"

namespace rawisp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void RequirePositive(double value, const char* name) {
  if (!(std::isfinite(value) && value > 0.0)) {
    std::ostringstream msg;
    msg << name << " must be a finite positive number, got " << value;
    throw Error(ErrorCode::kParameterDomain, msg.str());
  }
}

void RequireFinite(double value, const char* name) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be finite, got " << value;
    throw Error(ErrorCode::kParameterDomain, msg.str());
  }
}

void RequireInputs(const Plane& x, bool non_negative) {
  const auto v = x.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || (non_negative && v[i] < 0.0)) {
      std::ostringstream msg;
      msg << "input value " << v[i] << " at index " << i << " is outside "
          << (non_negative ? "[0, inf)" : "the finite reals");
      throw Error(ErrorCode::kDomain, msg.str());
    }
  }
}

void RequireUpstream(const Plane& x, const Plane& upstream) {
  if (!x.same_shape(upstream)) {
    std::ostringstream msg;
    msg << "upstream gradient " << upstream.rows() << "x" << upstream.cols()
        << " does not match input " << x.rows() << "x" << x.cols();
    throw Error(ErrorCode::kShape, msg.str());
  }
}

double YeoJohnsonScalar(double x, double lambda) {
  // expm1(log1p(x)) drifts by a few ulp.
  if (lambda == 1.0) return x;
  return std::expm1(lambda * std::log1p(x)) / lambda;
}

double GammaScalar(double x, double gamma) { return std::pow(x, gamma); }

double ErfScalar(double x, double mu, double sigma) {
  return Erf((x - mu) / (std::numbers::sqrt2 * sigma));
}

template <class Fn>
Plane Map(const Plane& x, Fn fn) {
  Plane out(x.rows(), x.cols());
  const auto in = x.values();
  auto o = out.values();
  for (std::size_t i = 0; i < in.size(); ++i) o[i] = fn(in[i]);
  return out;
}

}  // namespace

TransformKind KindOf(const TransformParams& params) {
  return std::visit(
      Overloaded{[](const GammaParams&) { return TransformKind::kGamma; },
                 [](const ErfParams&) { return TransformKind::kErf; },
                 [](const YeoJohnsonParams&) {
                   return TransformKind::kYeoJohnson;
                 }},
      params);
}

std::string_view KindName(TransformKind kind) {
  switch (kind) {
    case TransformKind::kGamma: return "gamma";
    case TransformKind::kErf: return "erf";
    case TransformKind::kYeoJohnson: return "yj";
  }
  return "yj";
}

std::optional<TransformKind> ParseKind(std::string_view name) {
  if (name == "gamma") return TransformKind::kGamma;
  if (name == "erf") return TransformKind::kErf;
  if (name == "yj" || name == "yeo-johnson") return TransformKind::kYeoJohnson;
  return std::nullopt;
}

TransformParams DefaultParams(TransformKind kind) {
  switch (kind) {
    case TransformKind::kGamma: return GammaParams{1.0};
    case TransformKind::kErf: return ErfParams{1.0, 1.0};
    case TransformKind::kYeoJohnson: return YeoJohnsonParams{0.35};
  }
  return YeoJohnsonParams{0.35};
}

std::vector<std::string_view> ParamNames(TransformKind kind) {
  switch (kind) {
    case TransformKind::kGamma: return {"gamma"};
    case TransformKind::kErf: return {"mu", "sigma"};
    case TransformKind::kYeoJohnson: return {"lambda"};
  }
  return {};
}

std::vector<double> ParamVector(const TransformParams& params) {
  return std::visit(
      Overloaded{
          [](const GammaParams& p) { return std::vector<double>{p.gamma}; },
          [](const ErfParams& p) { return std::vector<double>{p.mu, p.sigma}; },
          [](const YeoJohnsonParams& p) {
            return std::vector<double>{p.lambda};
          }},
      params);
}

TransformParams ParamsFromVector(TransformKind kind,
                                 std::span<const double> values) {
  const std::size_t expected = ParamNames(kind).size();
  if (values.size() != expected) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(KindName(kind)) + " takes " +
                    std::to_string(expected) + " parameter(s), got " +
                    std::to_string(values.size()));
  }
  switch (kind) {
    case TransformKind::kGamma: return GammaParams{values[0]};
    case TransformKind::kErf: return ErfParams{values[0], values[1]};
    case TransformKind::kYeoJohnson: return YeoJohnsonParams{values[0]};
  }
  return YeoJohnsonParams{values[0]};
}

Plane GammaForward(const Plane& x, double gamma) {
  RequirePositive(gamma, "gamma");
  RequireInputs(x, /*non_negative=*/true);
  return Map(x, [gamma](double v) { return GammaScalar(v, gamma); });
}

GradRecord GammaBackward(const Plane& x, double gamma, const Plane& upstream) {
  RequirePositive(gamma, "gamma");
  RequireInputs(x, /*non_negative=*/true);
  RequireUpstream(x, upstream);

  GradRecord grad{{0.0}, Plane(x.rows(), x.cols())};
  const auto in = x.values();
  const auto up = upstream.values();
  auto d_in = grad.d_input.values();
  double d_gamma = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] == 0.0) continue;  // subgradient convention at x = 0
    const double log_x = std::log(in[i]);
    const double y = std::exp(gamma * log_x);
    d_gamma += up[i] * y * log_x;
    d_in[i] = up[i] * gamma * std::exp((gamma - 1.0) * log_x);
  }
  grad.d_params[0] = d_gamma;
  return grad;
}

Plane ErfForward(const Plane& x, double mu, double sigma) {
  RequireFinite(mu, "mu");
  RequirePositive(sigma, "sigma");
  RequireInputs(x, /*non_negative=*/false);
  return Map(x, [mu, sigma](double v) { return ErfScalar(v, mu, sigma); });
}

GradRecord ErfBackward(const Plane& x, double mu, double sigma,
                       const Plane& upstream) {
  RequireFinite(mu, "mu");
  RequirePositive(sigma, "sigma");
  RequireInputs(x, /*non_negative=*/false);
  RequireUpstream(x, upstream);

  GradRecord grad{{0.0, 0.0}, Plane(x.rows(), x.cols())};
  const double scale = std::numbers::sqrt2 * sigma;
  const auto in = x.values();
  const auto up = upstream.values();
  auto d_in = grad.d_input.values();
  double d_mu = 0.0;
  double d_sigma = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double centered = in[i] - mu;
    const double z = centered / scale;
    const double g = 2.0 * std::numbers::inv_sqrtpi * std::exp(-z * z);
    const double dz = up[i] * g / scale;
    d_in[i] = dz;
    d_mu -= dz;
    d_sigma -= dz * centered / sigma;
  }
  grad.d_params = {d_mu, d_sigma};
  return grad;
}

Plane YeoJohnsonForward(const Plane& x, double lambda) {
  RequirePositive(lambda, "lambda");
  RequireInputs(x, /*non_negative=*/true);
  return Map(x, [lambda](double v) { return YeoJohnsonScalar(v, lambda); });
}

GradRecord YeoJohnsonBackward(const Plane& x, double lambda,
                              const Plane& upstream) {
  RequirePositive(lambda, "lambda");
  RequireInputs(x, /*non_negative=*/true);
  RequireUpstream(x, upstream);

  GradRecord grad{{0.0}, Plane(x.rows(), x.cols())};
  const auto in = x.values();
  const auto up = upstream.values();
  auto d_in = grad.d_input.values();
  const double inv_lambda_sq = 1.0 / (lambda * lambda);
  double d_lambda = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double log1p_x = std::log1p(in[i]);
    const double u = lambda * log1p_x;
    // (x+1)^l (l ln(x+1) - 1) + 1 written as u e^u - (e^u - 1).
    d_lambda += up[i] * (u * std::exp(u) - std::expm1(u)) * inv_lambda_sq;
    d_in[i] = up[i] * std::exp((lambda - 1.0) * log1p_x);
  }
  grad.d_params[0] = d_lambda;
  return grad;
}

Plane Forward(const TransformParams& params, const Plane& x) {
  return std::visit(
      Overloaded{
          [&](const GammaParams& p) { return GammaForward(x, p.gamma); },
          [&](const ErfParams& p) { return ErfForward(x, p.mu, p.sigma); },
          [&](const YeoJohnsonParams& p) {
            return YeoJohnsonForward(x, p.lambda);
          }},
      params);
}

GradRecord Backward(const TransformParams& params, const Plane& x,
                    const Plane& upstream) {
  return std::visit(
      Overloaded{[&](const GammaParams& p) {
                   return GammaBackward(x, p.gamma, upstream);
                 },
                 [&](const ErfParams& p) {
                   return ErfBackward(x, p.mu, p.sigma, upstream);
                 },
                 [&](const YeoJohnsonParams& p) {
                   return YeoJohnsonBackward(x, p.lambda, upstream);
                 }},
      params);
}

double ForwardScalar(const TransformParams& params, double x) {
  return Forward(params, Plane(1, 1, x))(0, 0);
}

}  // namespace rawisp
