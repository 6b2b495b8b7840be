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
#ifndef RAWISP_LEARNABLE_OPS_HPP_
#define RAWISP_LEARNABLE_OPS_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "rawisp/plane.hpp"

namespace rawisp {

// Point-wise intensity transforms with learnable parameters.
//
// Input scale differs per transform: Gamma and Erf expect unit-range data,
// Yeo-Johnson expects non-negative digital numbers. The forward functions only
// check the mathematical domain and never rescale.

enum class TransformKind { kGamma, kErf, kYeoJohnson };

struct GammaParams {
  double gamma = 1.0;
};
struct ErfParams {
  double mu = 1.0;
  double sigma = 1.0;
};
struct YeoJohnsonParams {
  double lambda = 0.35;
};

using TransformParams = std::variant<GammaParams, ErfParams, YeoJohnsonParams>;

TransformKind KindOf(const TransformParams& params);
std::string_view KindName(TransformKind kind);
// Accepts "gamma", "erf", "yj" / "yeo-johnson".
std::optional<TransformKind> ParseKind(std::string_view name);

// Initial values used for training: lambda 0.35, gamma 1.0, mu 1.0, sigma 1.0.
TransformParams DefaultParams(TransformKind kind);

// Flat views in declaration order: {gamma}, {mu, sigma}, {lambda}.
std::vector<std::string_view> ParamNames(TransformKind kind);
std::vector<double> ParamVector(const TransformParams& params);
// Throws Error{kInvalidArgument} on a size mismatch.
TransformParams ParamsFromVector(TransformKind kind,
                                 std::span<const double> values);

struct GradRecord {
  std::vector<double> d_params;  // same order as ParamVector
  Plane d_input;
};

// Gauss error function, |error| <= 1e-12 on [-6, 6]. Exactly odd.
double Erf(double z);
// 1 - erf(z) without cancellation for large positive z.
double Erfc(double z);

Plane GammaForward(const Plane& x, double gamma);
// Terms at x == 0 contribute 0 to both gradients.
GradRecord GammaBackward(const Plane& x, double gamma, const Plane& upstream);

Plane ErfForward(const Plane& x, double mu, double sigma);
GradRecord ErfBackward(const Plane& x, double mu, double sigma,
                       const Plane& upstream);

Plane YeoJohnsonForward(const Plane& x, double lambda);
GradRecord YeoJohnsonBackward(const Plane& x, double lambda,
                              const Plane& upstream);

// Dispatch on the parameter alternative.
Plane Forward(const TransformParams& params, const Plane& x);
GradRecord Backward(const TransformParams& params, const Plane& x,
                    const Plane& upstream);

// Scalar forms used where a whole plane is not needed.
double ForwardScalar(const TransformParams& params, double x);

}  // namespace rawisp

#endif  // RAWISP_LEARNABLE_OPS_HPP_
