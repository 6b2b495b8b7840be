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
#include "rawisp/rawisp.h"

#include <algorithm>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "rawisp/demosaic.hpp"
#include "rawisp/error.hpp"
#include "rawisp/fitting.hpp"
#include "rawisp/io.hpp"
#include "rawisp/learnable_ops.hpp"
#include "rawisp/pipeline.hpp"
#include "rawisp/raw_core.hpp"

struct rawisp_image {
  rawisp::BayerImage image;
};

struct rawisp_rgb {
  rawisp::RgbImage rgb;
};

struct rawisp_trace {
  rawisp::TrainTrace trace;
};

struct rawisp_pipeline_result {
  rawisp::PipelineResult result;
};

namespace {

using rawisp::Error;
using rawisp::ErrorCode;

thread_local std::string g_last_error;

rawisp_status Fail(rawisp_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
rawisp_status Guard(Fn&& fn) noexcept {
  try {
    fn();
    return RAWISP_OK;
  } catch (const Error& e) {
    return Fail(static_cast<rawisp_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(RAWISP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(RAWISP_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(RAWISP_ERR_INTERNAL, "unknown exception");
  }
}

void RequireNonNull(const void* p, const char* name) {
  if (p == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + " is NULL");
  }
}

rawisp::BayerPattern ToPattern(rawisp_pattern p) {
  switch (p) {
    case RAWISP_PATTERN_RGGB: return rawisp::BayerPattern::kRGGB;
    case RAWISP_PATTERN_BGGR: return rawisp::BayerPattern::kBGGR;
    case RAWISP_PATTERN_GRBG: return rawisp::BayerPattern::kGRBG;
    case RAWISP_PATTERN_GBRG: return rawisp::BayerPattern::kGBRG;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown Bayer pattern");
}

rawisp_pattern FromPattern(rawisp::BayerPattern p) {
  switch (p) {
    case rawisp::BayerPattern::kRGGB: return RAWISP_PATTERN_RGGB;
    case rawisp::BayerPattern::kBGGR: return RAWISP_PATTERN_BGGR;
    case rawisp::BayerPattern::kGRBG: return RAWISP_PATTERN_GRBG;
    case rawisp::BayerPattern::kGBRG: return RAWISP_PATTERN_GBRG;
  }
  return RAWISP_PATTERN_RGGB;
}

rawisp::Channel ToChannel(rawisp_channel c) {
  switch (c) {
    case RAWISP_CHANNEL_R: return rawisp::Channel::kR;
    case RAWISP_CHANNEL_G: return rawisp::Channel::kG;
    case RAWISP_CHANNEL_B: return rawisp::Channel::kB;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown channel");
}

rawisp::CropPolicy ToCrop(rawisp_crop_policy p) {
  switch (p) {
    case RAWISP_CROP_TRAILING: return rawisp::CropPolicy::kCropTrailing;
    case RAWISP_CROP_REQUIRE_EXACT: return rawisp::CropPolicy::kRequireExact;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown crop policy");
}

rawisp::BorderMode ToBorder(rawisp_border b) {
  switch (b) {
    case RAWISP_BORDER_RENORMALIZE: return rawisp::BorderMode::kRenormalizeByMask;
    case RAWISP_BORDER_ZERO: return rawisp::BorderMode::kZeroPad;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown border mode");
}

rawisp::TransformKind ToKind(rawisp_transform_kind k) {
  switch (k) {
    case RAWISP_TRANSFORM_GAMMA: return rawisp::TransformKind::kGamma;
    case RAWISP_TRANSFORM_ERF: return rawisp::TransformKind::kErf;
    case RAWISP_TRANSFORM_YEO_JOHNSON: return rawisp::TransformKind::kYeoJohnson;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown transform kind");
}

rawisp_transform_kind FromKind(rawisp::TransformKind k) {
  switch (k) {
    case rawisp::TransformKind::kGamma: return RAWISP_TRANSFORM_GAMMA;
    case rawisp::TransformKind::kErf: return RAWISP_TRANSFORM_ERF;
    case rawisp::TransformKind::kYeoJohnson: return RAWISP_TRANSFORM_YEO_JOHNSON;
  }
  return RAWISP_TRANSFORM_YEO_JOHNSON;
}

rawisp::TransformParams ToParams(const rawisp_params& p) {
  const rawisp::TransformKind kind = ToKind(p.kind);
  const std::size_t n = rawisp::ParamNames(kind).size();
  return rawisp::ParamsFromVector(kind, std::span<const double>(p.values, n));
}

rawisp_params FromParams(const rawisp::TransformParams& params) {
  rawisp_params out{FromKind(rawisp::KindOf(params)), {0.0, 0.0}};
  const std::vector<double> v = rawisp::ParamVector(params);
  std::copy(v.begin(), v.end(), out.values);
  return out;
}

rawisp::Plane PlaneFrom(const double* data, std::size_t rows,
                        std::size_t cols) {
  RequireNonNull(data, "data");
  return rawisp::Plane(rows, cols, std::vector<double>(data, data + rows * cols));
}

void CopyOut(const rawisp::Plane& plane, double* out, std::size_t count) {
  RequireNonNull(out, "out");
  if (count != plane.size()) {
    throw Error(ErrorCode::kShape,
                "output buffer holds " + std::to_string(count) +
                    " values, need " + std::to_string(plane.size()));
  }
  std::copy(plane.values().begin(), plane.values().end(), out);
}

}  // namespace

extern "C" {

const char* rawisp_last_error(void) { return g_last_error.c_str(); }

const char* rawisp_status_name(rawisp_status status) {
  if (status == RAWISP_OK) return "ok";
  if (status == RAWISP_ERR_INTERNAL) return "internal error";
  if (status >= RAWISP_ERR_DIMENSION && status <= RAWISP_ERR_INVALID_ARGUMENT) {
    return rawisp::ErrorCodeName(static_cast<ErrorCode>(status));
  }
  return "unknown status";
}

const char* rawisp_version(void) { return "1.0.0"; }

rawisp_status rawisp_image_create(const double* data, size_t height,
                                  size_t width, rawisp_pattern pattern,
                                  int bit_depth, rawisp_image** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    rawisp::BayerImage image(PlaneFrom(data, height, width), ToPattern(pattern),
                             bit_depth);
    *out = new rawisp_image{std::move(image)};
  });
}

void rawisp_image_destroy(rawisp_image* image) { delete image; }

rawisp_status rawisp_image_info(const rawisp_image* image, size_t* height,
                                size_t* width, rawisp_pattern* pattern,
                                int* bit_depth) {
  return Guard([&] {
    RequireNonNull(image, "image");
    if (height) *height = image->image.height();
    if (width) *width = image->image.width();
    if (pattern) *pattern = FromPattern(image->image.pattern());
    if (bit_depth) *bit_depth = image->image.bit_depth();
  });
}

rawisp_status rawisp_image_data(const rawisp_image* image,
                                const double** data) {
  return Guard([&] {
    RequireNonNull(image, "image");
    RequireNonNull(data, "data");
    *data = image->image.data().values().data();
  });
}

rawisp_status rawisp_crop_to_factor(const rawisp_image* image, int factor,
                                    rawisp_image** out) {
  return Guard([&] {
    RequireNonNull(image, "image");
    RequireNonNull(out, "out");
    *out = new rawisp_image{rawisp::CropToFactor(image->image, factor)};
  });
}

rawisp_status rawisp_downsample(const rawisp_image* image, int factor,
                                rawisp_crop_policy policy, rawisp_image** out) {
  return Guard([&] {
    RequireNonNull(image, "image");
    RequireNonNull(out, "out");
    *out = new rawisp_image{
        rawisp::DownsampleBayer(image->image, factor, ToCrop(policy))};
  });
}

rawisp_status rawisp_channel_mask(const rawisp_image* image,
                                  rawisp_channel channel, double* out,
                                  size_t count) {
  return Guard([&] {
    RequireNonNull(image, "image");
    CopyOut(rawisp::ChannelMask(image->image, ToChannel(channel)), out, count);
  });
}

rawisp_status rawisp_normalize_to_unit(const rawisp_image* image, double* out,
                                       size_t count) {
  return Guard([&] {
    RequireNonNull(image, "image");
    CopyOut(rawisp::NormalizeToUnit(image->image), out, count);
  });
}

rawisp_status rawisp_conv2d_same(const double* plane, size_t height,
                                 size_t width, const double* kernel,
                                 rawisp_border border, const double* mask,
                                 double* out) {
  return Guard([&] {
    RequireNonNull(kernel, "kernel");
    rawisp::Kernel3x3 k{};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) k.weights[r][c] = kernel[3 * r + c];
    }
    const rawisp::Plane input = PlaneFrom(plane, height, width);
    std::optional<rawisp::Plane> mask_plane;
    if (mask != nullptr) mask_plane = PlaneFrom(mask, height, width);
    const rawisp::Plane result = rawisp::Conv2dSame(
        input, k, ToBorder(border), mask_plane ? &*mask_plane : nullptr);
    CopyOut(result, out, height * width);
  });
}

rawisp_status rawisp_demosaic(const rawisp_image* image, rawisp_border border,
                              rawisp_rgb** out) {
  return Guard([&] {
    RequireNonNull(image, "image");
    RequireNonNull(out, "out");
    *out = new rawisp_rgb{rawisp::BilinearDemosaic(image->image, ToBorder(border))};
  });
}

void rawisp_rgb_destroy(rawisp_rgb* rgb) { delete rgb; }

rawisp_status rawisp_rgb_info(const rawisp_rgb* rgb, size_t* height,
                              size_t* width) {
  return Guard([&] {
    RequireNonNull(rgb, "rgb");
    if (height) *height = rgb->rgb.height();
    if (width) *width = rgb->rgb.width();
  });
}

rawisp_status rawisp_rgb_data(const rawisp_rgb* rgb, rawisp_channel channel,
                              const double** data) {
  return Guard([&] {
    RequireNonNull(rgb, "rgb");
    RequireNonNull(data, "data");
    switch (ToChannel(channel)) {
      case rawisp::Channel::kR: *data = rgb->rgb.r.values().data(); break;
      case rawisp::Channel::kG: *data = rgb->rgb.g.values().data(); break;
      case rawisp::Channel::kB: *data = rgb->rgb.b.values().data(); break;
    }
  });
}

double rawisp_erf(double z) { return rawisp::Erf(z); }

rawisp_status rawisp_default_params(rawisp_transform_kind kind,
                                    rawisp_params* out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    *out = FromParams(rawisp::DefaultParams(ToKind(kind)));
  });
}

rawisp_status rawisp_transform_forward(const rawisp_params* params,
                                       const double* x, size_t count,
                                       double* out) {
  return Guard([&] {
    RequireNonNull(params, "params");
    const rawisp::Plane y = rawisp::Forward(ToParams(*params), PlaneFrom(x, 1, count));
    CopyOut(y, out, count);
  });
}

rawisp_status rawisp_transform_backward(const rawisp_params* params,
                                        const double* x, const double* upstream,
                                        size_t count, double* d_params,
                                        double* d_input) {
  return Guard([&] {
    RequireNonNull(params, "params");
    RequireNonNull(d_params, "d_params");
    const rawisp::GradRecord grad = rawisp::Backward(
        ToParams(*params), PlaneFrom(x, 1, count), PlaneFrom(upstream, 1, count));
    if (d_input != nullptr) CopyOut(grad.d_input, d_input, count);
    std::copy(grad.d_params.begin(), grad.d_params.end(), d_params);
  });
}

rawisp_status rawisp_yj_loglik(const double* samples, size_t count,
                               double lambda, double* out) {
  return Guard([&] {
    RequireNonNull(samples, "samples");
    RequireNonNull(out, "out");
    *out = rawisp::YeoJohnsonLogLikelihood({samples, count}, lambda);
  });
}

rawisp_status rawisp_fit_lambda(const double* samples, size_t count, double lo,
                                double hi, double tolerance, double* out) {
  return Guard([&] {
    RequireNonNull(samples, "samples");
    RequireNonNull(out, "out");
    *out = rawisp::FitLambdaMle({samples, count}, {lo, hi, tolerance});
  });
}

rawisp_status rawisp_grad_check(rawisp_transform_kind kind, size_t draws,
                                uint64_t seed, rawisp_grad_check_result* out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    const rawisp::GradCheckResult r =
        rawisp::CheckTransformGradients(ToKind(kind), draws, seed);
    *out = {r.max_param_rel_error, r.max_input_rel_error, r.draws,
            r.skipped_points};
  });
}

void rawisp_train_config_default(rawisp_train_config* config) {
  if (config == nullptr) return;
  const rawisp::TrainConfig defaults;
  *config = {};
  config->learning_rate = defaults.learning_rate;
  config->iterations = defaults.iterations;
  config->seed = defaults.seed;
  config->kind = FromKind(defaults.kind);
  config->param_floor = defaults.param_floor;
  config->use_initial_params = 0;
  config->initial_params = FromParams(rawisp::DefaultParams(defaults.kind));
  config->samples_per_class = rawisp::ToyDataConfig{}.samples_per_class;
}

rawisp_status rawisp_train_toy(const rawisp_train_config* config,
                               rawisp_trace** out) {
  return Guard([&] {
    RequireNonNull(config, "config");
    RequireNonNull(out, "out");
    rawisp::TrainConfig cfg;
    cfg.learning_rate = config->learning_rate;
    cfg.iterations = config->iterations;
    cfg.seed = config->seed;
    cfg.kind = ToKind(config->kind);
    cfg.param_floor = config->param_floor;
    if (config->use_initial_params) {
      cfg.initial_params = ToParams(config->initial_params);
    }
    rawisp::ToyDataConfig data_cfg;
    data_cfg.samples_per_class = config->samples_per_class;
    const auto data = rawisp::GenerateToyData(data_cfg, cfg.seed);
    *out = new rawisp_trace{rawisp::TrainToy(data, cfg)};
  });
}

void rawisp_trace_destroy(rawisp_trace* trace) { delete trace; }

size_t rawisp_trace_length(const rawisp_trace* trace) {
  return trace == nullptr ? 0 : trace->trace.records.size();
}

rawisp_status rawisp_trace_record(const rawisp_trace* trace, size_t index,
                                  size_t* iteration, double* loss,
                                  double* params, size_t* n_params) {
  return Guard([&] {
    RequireNonNull(trace, "trace");
    if (index >= trace->trace.records.size()) {
      throw Error(ErrorCode::kInvalidArgument, "trace index out of range");
    }
    const rawisp::TraceRecord& rec = trace->trace.records[index];
    if (iteration) *iteration = rec.iteration;
    if (loss) *loss = rec.loss;
    if (params) std::copy(rec.params.begin(), rec.params.end(), params);
    if (n_params) *n_params = rec.params.size();
  });
}

rawisp_status rawisp_read_sidecar(const char* pgm_path, rawisp_metadata* out,
                                  int* found) {
  return Guard([&] {
    RequireNonNull(pgm_path, "pgm_path");
    RequireNonNull(out, "out");
    const auto meta = rawisp::ReadSidecar(pgm_path);
    if (found) *found = meta ? 1 : 0;
    if (meta) *out = {FromPattern(meta->pattern), meta->bit_depth};
  });
}

rawisp_status rawisp_read_pgm(const char* path, const rawisp_metadata* metadata,
                              rawisp_image** out) {
  return Guard([&] {
    RequireNonNull(path, "path");
    RequireNonNull(out, "out");
    rawisp::RawMetadata meta;
    if (metadata != nullptr) {
      meta = {ToPattern(metadata->pattern), metadata->bit_depth};
    }
    *out = new rawisp_image{rawisp::ReadRawPgm(path, meta)};
  });
}

rawisp_status rawisp_write_pgm(const rawisp_image* image, const char* path) {
  return Guard([&] {
    RequireNonNull(image, "image");
    RequireNonNull(path, "path");
    rawisp::WriteRawPgm(image->image, path);
  });
}

rawisp_status rawisp_write_ppm(const rawisp_rgb* rgb, const char* path,
                               int bit_depth) {
  return Guard([&] {
    RequireNonNull(rgb, "rgb");
    RequireNonNull(path, "path");
    rawisp::WriteRgbPpm(rgb->rgb, path, bit_depth);
  });
}

rawisp_status rawisp_write_trace_csv(const rawisp_trace* trace,
                                     const char* path) {
  return Guard([&] {
    RequireNonNull(trace, "trace");
    RequireNonNull(path, "path");
    rawisp::WriteTraceCsv(trace->trace, path);
  });
}

rawisp_status rawisp_write_histogram_csv(const rawisp_image* image, size_t bins,
                                         const char* path) {
  return Guard([&] {
    RequireNonNull(image, "image");
    RequireNonNull(path, "path");
    rawisp::WriteHistogramCsv(image->image, bins, path);
  });
}

void rawisp_pipeline_config_default(rawisp_pipeline_config* config) {
  if (config == nullptr) return;
  *config = {};
  config->factor = 1;
  config->crop = RAWISP_CROP_TRAILING;
  config->apply_transform = 0;
  config->transform = FromParams(rawisp::DefaultParams(rawisp::TransformKind::kYeoJohnson));
  config->demosaic = 0;
  config->border = RAWISP_BORDER_RENORMALIZE;
}

rawisp_status rawisp_pipeline_run(const rawisp_image* input,
                                  const rawisp_pipeline_config* config,
                                  rawisp_pipeline_result** out) {
  return Guard([&] {
    RequireNonNull(input, "input");
    RequireNonNull(config, "config");
    RequireNonNull(out, "out");
    rawisp::PipelineConfig cfg;
    cfg.factor = config->factor;
    cfg.crop = ToCrop(config->crop);
    if (config->apply_transform) cfg.transform = ToParams(config->transform);
    cfg.demosaic = config->demosaic != 0;
    cfg.border = ToBorder(config->border);
    *out = new rawisp_pipeline_result{rawisp::RunPipeline(input->image, cfg)};
  });
}

void rawisp_pipeline_result_destroy(rawisp_pipeline_result* result) {
  delete result;
}

int rawisp_pipeline_result_is_rgb(const rawisp_pipeline_result* result) {
  return result != nullptr &&
                 std::holds_alternative<rawisp::RgbImage>(result->result.image)
             ? 1
             : 0;
}

rawisp_status rawisp_pipeline_result_rescale(
    const rawisp_pipeline_result* result, int* has_rescale, double* scale,
    double* offset) {
  return Guard([&] {
    RequireNonNull(result, "result");
    const auto& r = result->result.rescale;
    if (has_rescale) *has_rescale = r ? 1 : 0;
    if (scale) *scale = r ? r->scale : 1.0;
    if (offset) *offset = r ? r->offset : 0.0;
  });
}

rawisp_status rawisp_pipeline_result_info(const rawisp_pipeline_result* result,
                                          size_t* height, size_t* width) {
  return Guard([&] {
    RequireNonNull(result, "result");
    std::visit(
        [&](const auto& img) {
          if (height) *height = img.height();
          if (width) *width = img.width();
        },
        result->result.image);
  });
}

rawisp_status rawisp_pipeline_result_write(const rawisp_pipeline_result* result,
                                           const char* path) {
  return Guard([&] {
    RequireNonNull(result, "result");
    RequireNonNull(path, "path");
    rawisp::WritePipelineResult(result->result, path);
  });
}

}  // extern "C"
