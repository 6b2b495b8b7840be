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
#ifndef RAWISP_PIPELINE_HPP_
#define RAWISP_PIPELINE_HPP_

#include <filesystem>
#include <optional>
#include <variant>

#include "rawisp/demosaic.hpp"
#include "rawisp/learnable_ops.hpp"
#include "rawisp/raw_core.hpp"

namespace rawisp {

struct PipelineConfig {
  int factor = 1;
  CropPolicy crop = CropPolicy::kCropTrailing;
  std::optional<TransformParams> transform;  // nullopt: no transform
  bool demosaic = false;
  BorderMode border = BorderMode::kRenormalizeByMask;
};

// Maps transform output y to stored DN as scale * y + offset.
struct AffineRescale {
  double scale = 1.0;
  double offset = 0.0;
};

struct PipelineResult {
  std::variant<BayerImage, RgbImage> image;  // DN scale, not quantized
  int bit_depth = 12;
  std::optional<AffineRescale> rescale;
};

// The rescale that sends the transform's output range over its input domain
// ([0, 2^bits - 1] DN for Yeo-Johnson, [0, 1] otherwise) onto
// [0, 2^bits - 1].
AffineRescale OutputRescale(const TransformParams& params, int bit_depth);

// Crop, downsample, transform, then optionally demosaic. Gamma is applied
// after demosaicing when both are requested.
PipelineResult RunPipeline(const BayerImage& input,
                           const PipelineConfig& config);

// PGM for mosaics, PPM for RGB.
void WritePipelineResult(const PipelineResult& result,
                         const std::filesystem::path& path);

}  // namespace rawisp

#endif  // RAWISP_PIPELINE_HPP_
