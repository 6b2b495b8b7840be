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
#ifndef RAWISP_DEMOSAIC_HPP_
#define RAWISP_DEMOSAIC_HPP_

#include <array>
#include <optional>
#include <string_view>

#include "rawisp/plane.hpp"
#include "rawisp/raw_core.hpp"

namespace rawisp {

struct Kernel3x3 {
  std::array<std::array<double, 3>, 3> weights;
};

// Bilinear interpolation kernels for the green and the red/blue planes.
inline constexpr Kernel3x3 kGreenKernel{{{
    {0.0, 0.25, 0.0},
    {0.25, 1.0, 0.25},
    {0.0, 0.25, 0.0},
}}};
inline constexpr Kernel3x3 kRedBlueKernel{{{
    {0.25, 0.5, 0.25},
    {0.5, 1.0, 0.5},
    {0.25, 0.5, 0.25},
}}};

enum class BorderMode {
  // Out-of-bounds taps read zero.
  kZeroPad,
  // Output is divided by the kernel mass that fell on in-bounds pixels where
  // the mask is 1, i.e. a weighted mean of the available samples.
  kRenormalizeByMask,
};

std::string_view BorderModeName(BorderMode mode);
std::optional<BorderMode> ParseBorderMode(std::string_view name);

struct RgbImage {
  Plane r;
  Plane g;
  Plane b;

  std::size_t height() const noexcept { return r.rows(); }
  std::size_t width() const noexcept { return r.cols(); }
};

// Same-size 3x3 correlation (no kernel flip). With kRenormalizeByMask a pixel
// whose normalizer is zero gets 0. Throws Error{kShape} if `mask` does not
// match `plane`.
Plane Conv2dSame(const Plane& plane, const Kernel3x3& kernel, BorderMode border,
                 const Plane* mask = nullptr);

// Masked-convolution bilinear demosaic of a mosaic plane. At native sites the
// output equals the input exactly.
RgbImage BilinearDemosaic(const Plane& mosaic, BayerPattern pattern,
                          BorderMode border = BorderMode::kRenormalizeByMask);
RgbImage BilinearDemosaic(const BayerImage& image,
                          BorderMode border = BorderMode::kRenormalizeByMask);

}  // namespace rawisp

#endif  // RAWISP_DEMOSAIC_HPP_
