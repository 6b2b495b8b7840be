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
#include "rawisp/pipeline.hpp"

#include <algorithm>

#include "rawisp/error.hpp"
#include "rawisp/io.hpp"

namespace rawisp {

namespace {

Plane Rescaled(const Plane& plane, const AffineRescale& rescale,
               double max_value) {
  Plane out = plane;
  for (double& v : out.values()) {
    v = std::clamp(rescale.scale * v + rescale.offset, 0.0, max_value);
  }
  return out;
}

}  // namespace

AffineRescale OutputRescale(const TransformParams& params, int bit_depth) {
  const double max_v = MaxValueForBits(bit_depth);
  const double domain_hi =
      KindOf(params) == TransformKind::kYeoJohnson ? max_v : 1.0;
  const double lo = ForwardScalar(params, 0.0);
  const double hi = ForwardScalar(params, domain_hi);
  if (!(hi > lo)) {
    throw Error(ErrorCode::kDegenerate,
                "transform output range is empty; cannot rescale");
  }
  const double scale = max_v / (hi - lo);
  return {scale, 0.0 - lo * scale};
}

PipelineResult RunPipeline(const BayerImage& input,
                           const PipelineConfig& config) {
  const BayerImage reduced = DownsampleBayer(input, config.factor, config.crop);
  const int bits = reduced.bit_depth();
  const double max_v = reduced.max_value();

  if (!config.transform) {
    if (config.demosaic) {
      return {BilinearDemosaic(reduced, config.border), bits, std::nullopt};
    }
    return {reduced, bits, std::nullopt};
  }

  const TransformParams& params = *config.transform;
  const TransformKind kind = KindOf(params);
  const AffineRescale rescale = OutputRescale(params, bits);
  const Plane x = kind == TransformKind::kYeoJohnson ? reduced.data()
                                                     : NormalizeToUnit(reduced);

  if (!config.demosaic) {
    Plane y = Rescaled(Forward(params, x), rescale, max_v);
    return {BayerImage(std::move(y), reduced.pattern(), bits), bits, rescale};
  }

  RgbImage rgb;
  if (kind == TransformKind::kGamma) {
    const RgbImage linear = BilinearDemosaic(x, reduced.pattern(), config.border);
    rgb = {Forward(params, linear.r), Forward(params, linear.g),
           Forward(params, linear.b)};
  } else {
    rgb = BilinearDemosaic(Forward(params, x), reduced.pattern(), config.border);
  }
  return {RgbImage{Rescaled(rgb.r, rescale, max_v), Rescaled(rgb.g, rescale, max_v),
                   Rescaled(rgb.b, rescale, max_v)},
          bits, rescale};
}

void WritePipelineResult(const PipelineResult& result,
                         const std::filesystem::path& path) {
  if (const auto* mosaic = std::get_if<BayerImage>(&result.image)) {
    WriteRawPgm(*mosaic, path);
  } else {
    WriteRgbPpm(std::get<RgbImage>(result.image), path, result.bit_depth);
  }
}

}  // namespace rawisp
