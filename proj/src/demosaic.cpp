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
#include "rawisp/demosaic.hpp"

#include <sstream>

#include "rawisp/error.hpp"

namespace rawisp {

std::string_view BorderModeName(BorderMode mode) {
  return mode == BorderMode::kZeroPad ? "zero" : "renormalize";
}

std::optional<BorderMode> ParseBorderMode(std::string_view name) {
  if (name == "zero") return BorderMode::kZeroPad;
  if (name == "renormalize") return BorderMode::kRenormalizeByMask;
  return std::nullopt;
}

Plane Conv2dSame(const Plane& plane, const Kernel3x3& kernel, BorderMode border,
                 const Plane* mask) {
  if (mask != nullptr && !mask->same_shape(plane)) {
    std::ostringstream msg;
    msg << "mask " << mask->rows() << "x" << mask->cols()
        << " does not match plane " << plane.rows() << "x" << plane.cols();
    throw Error(ErrorCode::kShape, msg.str());
  }
  const auto rows = static_cast<std::ptrdiff_t>(plane.rows());
  const auto cols = static_cast<std::ptrdiff_t>(plane.cols());
  const bool renormalize = border == BorderMode::kRenormalizeByMask;

  Plane out(plane.rows(), plane.cols());
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      double sum = 0.0;
      double mass = 0.0;
      for (std::ptrdiff_t dr = -1; dr <= 1; ++dr) {
        const std::ptrdiff_t rr = r + dr;
        if (rr < 0 || rr >= rows) continue;
        for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
          const std::ptrdiff_t cc = c + dc;
          if (cc < 0 || cc >= cols) continue;
          const double w = kernel.weights[dr + 1][dc + 1];
          sum += w * plane(rr, cc);
          if (renormalize && (mask == nullptr || (*mask)(rr, cc) != 0.0)) {
            mass += w;
          }
        }
      }
      if (renormalize) {
        out(r, c) = mass > 0.0 ? sum / mass : 0.0;
      } else {
        out(r, c) = sum;
      }
    }
  }
  return out;
}

RgbImage BilinearDemosaic(const Plane& mosaic, BayerPattern pattern,
                          BorderMode border) {
  auto interpolate = [&](Channel channel, const Kernel3x3& kernel) {
    const Plane mask =
        ChannelMask(pattern, mosaic.rows(), mosaic.cols(), channel);
    Plane masked = mosaic;
    auto m = mask.values();
    auto v = masked.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m[i];
    return Conv2dSame(masked, kernel, border, &mask);
  };
  return RgbImage{interpolate(Channel::kR, kRedBlueKernel),
                  interpolate(Channel::kG, kGreenKernel),
                  interpolate(Channel::kB, kRedBlueKernel)};
}

RgbImage BilinearDemosaic(const BayerImage& image, BorderMode border) {
  return BilinearDemosaic(image.data(), image.pattern(), border);
}

}  // namespace rawisp
