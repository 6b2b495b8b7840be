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
/*
 * C interface to the rawisp library.
 *
 * Every fallible call returns a rawisp_status. On failure, the message of the
 * most recent error on the calling thread is available from
 * rawisp_last_error() until the next failing call on that thread. Output
 * handles are only written on success. Handles are owned by the caller and
 * released with the matching *_destroy function; destroying NULL is a no-op.
 *
 * Pointers returned by *_data accessors borrow from the handle and stay valid
 * until it is destroyed.
 */
#ifndef RAWISP_RAWISP_H_
#define RAWISP_RAWISP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RAWISP_BUILDING_LIBRARY)
#    define RAWISP_API __declspec(dllexport)
#  else
#    define RAWISP_API __declspec(dllimport)
#  endif
#else
#  define RAWISP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rawisp_status {
  RAWISP_OK = 0,
  RAWISP_ERR_DIMENSION = 1,
  RAWISP_ERR_RANGE = 2,
  RAWISP_ERR_SIZE = 3,
  RAWISP_ERR_ALIGNMENT = 4,
  RAWISP_ERR_SHAPE = 5,
  RAWISP_ERR_PARAMETER_DOMAIN = 6,
  RAWISP_ERR_DOMAIN = 7,
  RAWISP_ERR_DEGENERATE = 8,
  RAWISP_ERR_EVALUATION = 9,
  RAWISP_ERR_DIVERGENCE = 10,
  RAWISP_ERR_PARSE = 11,
  RAWISP_ERR_IO = 12,
  RAWISP_ERR_INVALID_ARGUMENT = 13,
  RAWISP_ERR_INTERNAL = 100
} rawisp_status;

typedef enum rawisp_pattern {
  RAWISP_PATTERN_RGGB = 0,
  RAWISP_PATTERN_BGGR = 1,
  RAWISP_PATTERN_GRBG = 2,
  RAWISP_PATTERN_GBRG = 3
} rawisp_pattern;

typedef enum rawisp_channel {
  RAWISP_CHANNEL_R = 0,
  RAWISP_CHANNEL_G = 1,
  RAWISP_CHANNEL_B = 2
} rawisp_channel;

typedef enum rawisp_crop_policy {
  RAWISP_CROP_TRAILING = 0,
  RAWISP_CROP_REQUIRE_EXACT = 1
} rawisp_crop_policy;

typedef enum rawisp_border {
  RAWISP_BORDER_RENORMALIZE = 0,
  RAWISP_BORDER_ZERO = 1
} rawisp_border;

typedef enum rawisp_transform_kind {
  RAWISP_TRANSFORM_GAMMA = 0,
  RAWISP_TRANSFORM_ERF = 1,
  RAWISP_TRANSFORM_YEO_JOHNSON = 2
} rawisp_transform_kind;

/* values: {gamma}, {mu, sigma} or {lambda}; unused slots are ignored. */
typedef struct rawisp_params {
  rawisp_transform_kind kind;
  double values[2];
} rawisp_params;

typedef struct rawisp_metadata {
  rawisp_pattern pattern;
  int bit_depth;
} rawisp_metadata;

typedef struct rawisp_image rawisp_image;   /* validated Bayer mosaic */
typedef struct rawisp_rgb rawisp_rgb;       /* three demosaiced planes */
typedef struct rawisp_trace rawisp_trace;   /* toy-training trace */
typedef struct rawisp_pipeline_result rawisp_pipeline_result;

/* ---- errors ------------------------------------------------------------ */

RAWISP_API const char* rawisp_last_error(void);
RAWISP_API const char* rawisp_status_name(rawisp_status status);
RAWISP_API const char* rawisp_version(void);

/* ---- Bayer images ------------------------------------------------------ */

/* `data` holds height * width row-major values. */
RAWISP_API rawisp_status rawisp_image_create(const double* data, size_t height,
                                             size_t width,
                                             rawisp_pattern pattern,
                                             int bit_depth, rawisp_image** out);
RAWISP_API void rawisp_image_destroy(rawisp_image* image);
RAWISP_API rawisp_status rawisp_image_info(const rawisp_image* image,
                                           size_t* height, size_t* width,
                                           rawisp_pattern* pattern,
                                           int* bit_depth);
RAWISP_API rawisp_status rawisp_image_data(const rawisp_image* image,
                                           const double** data);

RAWISP_API rawisp_status rawisp_crop_to_factor(const rawisp_image* image,
                                               int factor, rawisp_image** out);
RAWISP_API rawisp_status rawisp_downsample(const rawisp_image* image,
                                           int factor,
                                           rawisp_crop_policy policy,
                                           rawisp_image** out);
/* `out` receives height * width values. */
RAWISP_API rawisp_status rawisp_channel_mask(const rawisp_image* image,
                                             rawisp_channel channel,
                                             double* out, size_t count);
RAWISP_API rawisp_status rawisp_normalize_to_unit(const rawisp_image* image,
                                                  double* out, size_t count);

/* ---- demosaicing ------------------------------------------------------- */

/* kernel is 3x3 row-major; mask may be NULL. */
RAWISP_API rawisp_status rawisp_conv2d_same(const double* plane, size_t height,
                                            size_t width, const double* kernel,
                                            rawisp_border border,
                                            const double* mask, double* out);
RAWISP_API rawisp_status rawisp_demosaic(const rawisp_image* image,
                                         rawisp_border border,
                                         rawisp_rgb** out);
RAWISP_API void rawisp_rgb_destroy(rawisp_rgb* rgb);
RAWISP_API rawisp_status rawisp_rgb_info(const rawisp_rgb* rgb, size_t* height,
                                         size_t* width);
RAWISP_API rawisp_status rawisp_rgb_data(const rawisp_rgb* rgb,
                                         rawisp_channel channel,
                                         const double** data);

/* ---- learnable transforms ---------------------------------------------- */

RAWISP_API double rawisp_erf(double z);
RAWISP_API rawisp_status rawisp_default_params(rawisp_transform_kind kind,
                                               rawisp_params* out);
/* Element-wise over `count` values. */
RAWISP_API rawisp_status rawisp_transform_forward(const rawisp_params* params,
                                                  const double* x, size_t count,
                                                  double* out);
/* d_params receives 1 (gamma, lambda) or 2 (mu, sigma) values; d_input may
 * be NULL. */
RAWISP_API rawisp_status rawisp_transform_backward(const rawisp_params* params,
                                                   const double* x,
                                                   const double* upstream,
                                                   size_t count,
                                                   double* d_params,
                                                   double* d_input);

/* ---- fitting and training ---------------------------------------------- */

RAWISP_API rawisp_status rawisp_yj_loglik(const double* samples, size_t count,
                                          double lambda, double* out);
RAWISP_API rawisp_status rawisp_fit_lambda(const double* samples, size_t count,
                                           double lo, double hi,
                                           double tolerance, double* out);

typedef struct rawisp_grad_check_result {
  double max_param_rel_error;
  double max_input_rel_error;
  size_t draws;
  size_t skipped_points;
} rawisp_grad_check_result;

RAWISP_API rawisp_status rawisp_grad_check(rawisp_transform_kind kind,
                                           size_t draws, uint64_t seed,
                                           rawisp_grad_check_result* out);

typedef struct rawisp_train_config {
  double learning_rate;
  size_t iterations;
  uint64_t seed;
  rawisp_transform_kind kind;
  double param_floor;
  int use_initial_params;  /* nonzero: start from initial_params */
  rawisp_params initial_params;
  size_t samples_per_class;
} rawisp_train_config;

RAWISP_API void rawisp_train_config_default(rawisp_train_config* config);
/* Trains on the seeded dark-tone generator. */
RAWISP_API rawisp_status rawisp_train_toy(const rawisp_train_config* config,
                                          rawisp_trace** out);
RAWISP_API void rawisp_trace_destroy(rawisp_trace* trace);
RAWISP_API size_t rawisp_trace_length(const rawisp_trace* trace);
/* params receives up to 2 values; n_params may be NULL. */
RAWISP_API rawisp_status rawisp_trace_record(const rawisp_trace* trace,
                                             size_t index, size_t* iteration,
                                             double* loss, double* params,
                                             size_t* n_params);

/* ---- files ------------------------------------------------------------- */

/* found is set to 1 when <pgm_path>.json exists and was read. */
RAWISP_API rawisp_status rawisp_read_sidecar(const char* pgm_path,
                                             rawisp_metadata* out, int* found);
RAWISP_API rawisp_status rawisp_read_pgm(const char* path,
                                         const rawisp_metadata* metadata,
                                         rawisp_image** out);
RAWISP_API rawisp_status rawisp_write_pgm(const rawisp_image* image,
                                          const char* path);
RAWISP_API rawisp_status rawisp_write_ppm(const rawisp_rgb* rgb,
                                          const char* path, int bit_depth);
RAWISP_API rawisp_status rawisp_write_trace_csv(const rawisp_trace* trace,
                                                const char* path);
RAWISP_API rawisp_status rawisp_write_histogram_csv(const rawisp_image* image,
                                                    size_t bins,
                                                    const char* path);

/* ---- pipeline ---------------------------------------------------------- */

typedef struct rawisp_pipeline_config {
  int factor;
  rawisp_crop_policy crop;
  int apply_transform;  /* nonzero: apply `transform` */
  rawisp_params transform;
  int demosaic;
  rawisp_border border;
} rawisp_pipeline_config;

RAWISP_API void rawisp_pipeline_config_default(rawisp_pipeline_config* config);
RAWISP_API rawisp_status rawisp_pipeline_run(
    const rawisp_image* input, const rawisp_pipeline_config* config,
    rawisp_pipeline_result** out);
RAWISP_API void rawisp_pipeline_result_destroy(rawisp_pipeline_result* result);
/* Returns 1 for an RGB result, 0 for a mosaic. */
RAWISP_API int rawisp_pipeline_result_is_rgb(
    const rawisp_pipeline_result* result);
/* has_rescale is 0 when no transform ran. */
RAWISP_API rawisp_status rawisp_pipeline_result_rescale(
    const rawisp_pipeline_result* result, int* has_rescale, double* scale,
    double* offset);
RAWISP_API rawisp_status rawisp_pipeline_result_info(
    const rawisp_pipeline_result* result, size_t* height, size_t* width);
RAWISP_API rawisp_status rawisp_pipeline_result_write(
    const rawisp_pipeline_result* result, const char* path);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* RAWISP_RAWISP_H_ */
