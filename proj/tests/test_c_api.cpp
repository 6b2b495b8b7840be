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
// Exercises the shared library strictly through its C header.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "rawisp/rawisp.h"

namespace {

std::vector<double> Ramp(std::size_t n, double step) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::fmod(i * step, 4096.0);
  return v;
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("rawisp_capi_" + name)).string();
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(rawisp_status_name(RAWISP_OK)) == "ok");
  CHECK(std::string(rawisp_status_name(RAWISP_ERR_ALIGNMENT)) == "alignment error");
  CHECK(std::string(rawisp_status_name(RAWISP_ERR_INTERNAL)) == "internal error");
  CHECK(std::string(rawisp_status_name(static_cast<rawisp_status>(77))) == "unknown status");
  CHECK(std::string(rawisp_version()) == "1.0.0");
}

TEST_CASE("image lifecycle and downsampling") {
  const std::vector<double> data = Ramp(12 * 12, 7.0);
  rawisp_image* img = nullptr;
  REQUIRE(rawisp_image_create(data.data(), 12, 12, RAWISP_PATTERN_BGGR, 12, &img) == RAWISP_OK);
  size_t h = 0, w = 0;
  rawisp_pattern p = RAWISP_PATTERN_RGGB;
  int bits = 0;
  REQUIRE(rawisp_image_info(img, &h, &w, &p, &bits) == RAWISP_OK);
  CHECK(h == 12);
  CHECK(w == 12);
  CHECK(p == RAWISP_PATTERN_BGGR);
  CHECK(bits == 12);

  rawisp_image* small = nullptr;
  REQUIRE(rawisp_downsample(img, 3, RAWISP_CROP_TRAILING, &small) == RAWISP_OK);
  REQUIRE(rawisp_image_info(small, &h, &w, nullptr, nullptr) == RAWISP_OK);
  CHECK(h == 4);
  CHECK(w == 4);
  const double* out = nullptr;
  REQUIRE(rawisp_image_data(small, &out) == RAWISP_OK);
  CHECK(out[0] == (data[0] + data[2] + data[24] + data[26]) / 4.0);

  rawisp_image* untouched = reinterpret_cast<rawisp_image*>(0x1);
  CHECK(rawisp_downsample(img, 5, RAWISP_CROP_REQUIRE_EXACT, &untouched) ==
        RAWISP_ERR_ALIGNMENT);
  CHECK(untouched == reinterpret_cast<rawisp_image*>(0x1));
  CHECK(std::string(rawisp_last_error()).find("not divisible") != std::string::npos);
  CHECK(rawisp_downsample(img, 2, RAWISP_CROP_TRAILING, &untouched) ==
        RAWISP_ERR_INVALID_ARGUMENT);

  rawisp_image* cropped = nullptr;
  REQUIRE(rawisp_crop_to_factor(img, 5, &cropped) == RAWISP_OK);
  REQUIRE(rawisp_image_info(cropped, &h, &w, nullptr, nullptr) == RAWISP_OK);
  CHECK(h == 10);

  std::vector<double> mask(144);
  CHECK(rawisp_channel_mask(img, RAWISP_CHANNEL_B, mask.data(), mask.size()) == RAWISP_OK);
  CHECK(mask[0] == 1.0);
  CHECK(mask[13] == 0.0);
  CHECK(rawisp_channel_mask(img, RAWISP_CHANNEL_B, mask.data(), 10) == RAWISP_ERR_SHAPE);
  std::vector<double> unit(144);
  CHECK(rawisp_normalize_to_unit(img, unit.data(), unit.size()) == RAWISP_OK);
  CHECK(unit[1] == data[1] / 4095.0);

  rawisp_image_destroy(cropped);
  rawisp_image_destroy(small);
  rawisp_image_destroy(img);
  rawisp_image_destroy(nullptr);
}

TEST_CASE("image validation errors") {
  const std::vector<double> odd(6, 1.0);
  rawisp_image* img = nullptr;
  CHECK(rawisp_image_create(odd.data(), 3, 2, RAWISP_PATTERN_RGGB, 12, &img) ==
        RAWISP_ERR_DIMENSION);
  const std::vector<double> hot = {0, 0, 0, 5000};
  CHECK(rawisp_image_create(hot.data(), 2, 2, RAWISP_PATTERN_RGGB, 12, &img) ==
        RAWISP_ERR_RANGE);
  CHECK(rawisp_image_create(hot.data(), 2, 2, static_cast<rawisp_pattern>(9), 16, &img) ==
        RAWISP_ERR_INVALID_ARGUMENT);
  CHECK(rawisp_image_create(nullptr, 2, 2, RAWISP_PATTERN_RGGB, 12, &img) ==
        RAWISP_ERR_INVALID_ARGUMENT);
  CHECK(rawisp_image_create(hot.data(), 2, 2, RAWISP_PATTERN_RGGB, 16, nullptr) ==
        RAWISP_ERR_INVALID_ARGUMENT);
  CHECK(img == nullptr);
}

TEST_CASE("convolution and demosaic") {
  const std::vector<double> ones(25, 1.0);
  const double kg[9] = {0, 0.25, 0, 0.25, 1, 0.25, 0, 0.25, 0};
  std::vector<double> out(25);
  REQUIRE(rawisp_conv2d_same(ones.data(), 5, 5, kg, RAWISP_BORDER_ZERO, nullptr, out.data()) ==
          RAWISP_OK);
  CHECK(out[12] == 2.0);
  CHECK(out[0] == 1.5);

  const std::vector<double> data = {10, 20, 10, 20, 20, 30, 20, 30,
                                    10, 20, 10, 20, 20, 30, 20, 30};
  rawisp_image* img = nullptr;
  REQUIRE(rawisp_image_create(data.data(), 4, 4, RAWISP_PATTERN_RGGB, 12, &img) == RAWISP_OK);
  rawisp_rgb* rgb = nullptr;
  REQUIRE(rawisp_demosaic(img, RAWISP_BORDER_RENORMALIZE, &rgb) == RAWISP_OK);
  size_t h = 0, w = 0;
  REQUIRE(rawisp_rgb_info(rgb, &h, &w) == RAWISP_OK);
  CHECK(h == 4);
  const double* r = nullptr;
  const double* g = nullptr;
  const double* b = nullptr;
  REQUIRE(rawisp_rgb_data(rgb, RAWISP_CHANNEL_R, &r) == RAWISP_OK);
  REQUIRE(rawisp_rgb_data(rgb, RAWISP_CHANNEL_G, &g) == RAWISP_OK);
  REQUIRE(rawisp_rgb_data(rgb, RAWISP_CHANNEL_B, &b) == RAWISP_OK);
  for (int i = 0; i < 16; ++i) {
    CHECK(r[i] == 10.0);
    CHECK(g[i] == 20.0);
    CHECK(b[i] == 30.0);
  }
  const std::string ppm = TempPath("c.ppm");
  CHECK(rawisp_write_ppm(rgb, ppm.c_str(), 12) == RAWISP_OK);
  CHECK(rawisp_write_ppm(rgb, ppm.c_str(), 0) == RAWISP_ERR_INVALID_ARGUMENT);
  std::filesystem::remove(ppm);
  rawisp_rgb_destroy(rgb);
  rawisp_image_destroy(img);
}

TEST_CASE("transforms through the C surface") {
  CHECK(std::abs(rawisp_erf(1.0) - 0.8427007929497149) < 1e-15);
  rawisp_params params{};
  REQUIRE(rawisp_default_params(RAWISP_TRANSFORM_YEO_JOHNSON, &params) == RAWISP_OK);
  CHECK(params.values[0] == 0.35);
  REQUIRE(rawisp_default_params(RAWISP_TRANSFORM_ERF, &params) == RAWISP_OK);
  CHECK(params.values[0] == 1.0);
  CHECK(params.values[1] == 1.0);

  const double x[] = {0.0, 1.0, 4095.0};
  double y[3];
  rawisp_params yj{RAWISP_TRANSFORM_YEO_JOHNSON, {1.0, 0.0}};
  REQUIRE(rawisp_transform_forward(&yj, x, 3, y) == RAWISP_OK);
  CHECK(y[0] == 0.0);
  CHECK(std::abs(y[2] - 4095.0) < 1e-9);

  const double up[] = {0.0, 1.0, 0.0};
  double dp[2] = {0, 0};
  double dx[3];
  REQUIRE(rawisp_transform_backward(&yj, x, up, 3, dp, dx) == RAWISP_OK);
  CHECK(std::abs(dp[0] - (2.0 * std::log(2.0) - 1.0)) < 1e-15);
  CHECK(rawisp_transform_backward(&yj, x, up, 3, dp, nullptr) == RAWISP_OK);

  rawisp_params bad{RAWISP_TRANSFORM_GAMMA, {0.0, 0.0}};
  CHECK(rawisp_transform_forward(&bad, x, 3, y) == RAWISP_ERR_PARAMETER_DOMAIN);
  const double neg[] = {-1.0};
  CHECK(rawisp_transform_forward(&yj, neg, 1, y) == RAWISP_ERR_DOMAIN);
}

TEST_CASE("fitting and training through the C surface") {
  std::vector<double> samples;
  for (int i = 0; i < 400; ++i) samples.push_back(std::expm1(2.0 + 0.01 * (i % 97)));
  double ll = 0.0;
  CHECK(rawisp_yj_loglik(samples.data(), samples.size(), 0.5, &ll) == RAWISP_OK);
  double lambda = 0.0;
  CHECK(rawisp_fit_lambda(samples.data(), samples.size(), 1e-3, 3.0, 1e-4, &lambda) ==
        RAWISP_OK);
  CHECK(lambda > 0.0);
  const double same[] = {3.0, 3.0};
  CHECK(rawisp_yj_loglik(same, 2, 0.5, &ll) == RAWISP_ERR_DEGENERATE);

  rawisp_grad_check_result gc{};
  REQUIRE(rawisp_grad_check(RAWISP_TRANSFORM_ERF, 20, 3, &gc) == RAWISP_OK);
  CHECK(gc.draws == 20);
  CHECK(gc.max_param_rel_error < 1e-5);
  CHECK(gc.max_input_rel_error < 1e-5);

  rawisp_train_config config;
  rawisp_train_config_default(&config);
  CHECK(config.learning_rate == 3e-4);
  CHECK(config.param_floor == 1e-4);
  CHECK(config.kind == RAWISP_TRANSFORM_YEO_JOHNSON);
  config.iterations = 25;
  rawisp_trace* trace = nullptr;
  REQUIRE(rawisp_train_toy(&config, &trace) == RAWISP_OK);
  CHECK(rawisp_trace_length(trace) == 25);
  size_t it = 0, n_params = 0;
  double loss = 0.0;
  double theta[2] = {0, 0};
  REQUIRE(rawisp_trace_record(trace, 24, &it, &loss, theta, &n_params) == RAWISP_OK);
  CHECK(it == 24);
  CHECK(n_params == 1);
  CHECK(theta[0] < 0.35);
  CHECK(rawisp_trace_record(trace, 25, &it, &loss, theta, &n_params) ==
        RAWISP_ERR_INVALID_ARGUMENT);
  const std::string csv = TempPath("t.csv");
  CHECK(rawisp_write_trace_csv(trace, csv.c_str()) == RAWISP_OK);
  std::filesystem::remove(csv);
  rawisp_trace_destroy(trace);

  config.use_initial_params = 1;
  config.initial_params = {RAWISP_TRANSFORM_GAMMA, {1.0, 0.0}};
  CHECK(rawisp_train_toy(&config, &trace) == RAWISP_ERR_INVALID_ARGUMENT);
  config.use_initial_params = 0;
  config.learning_rate = -1.0;
  CHECK(rawisp_train_toy(&config, &trace) == RAWISP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("files and pipeline through the C surface") {
  const std::vector<double> data = Ramp(20 * 30, 13.0);
  rawisp_image* img = nullptr;
  REQUIRE(rawisp_image_create(data.data(), 20, 30, RAWISP_PATTERN_RGGB, 12, &img) == RAWISP_OK);
  const std::string pgm = TempPath("a.pgm");
  REQUIRE(rawisp_write_pgm(img, pgm.c_str()) == RAWISP_OK);

  rawisp_metadata meta{RAWISP_PATTERN_GBRG, 16};
  int found = 1;
  REQUIRE(rawisp_read_sidecar(pgm.c_str(), &meta, &found) == RAWISP_OK);
  CHECK(found == 0);
  CHECK(meta.pattern == RAWISP_PATTERN_GBRG);
  meta = {RAWISP_PATTERN_RGGB, 12};
  rawisp_image* back = nullptr;
  REQUIRE(rawisp_read_pgm(pgm.c_str(), &meta, &back) == RAWISP_OK);
  const double* values = nullptr;
  REQUIRE(rawisp_image_data(back, &values) == RAWISP_OK);
  CHECK(std::vector<double>(values, values + data.size()) == data);

  const std::string hist = TempPath("h.csv");
  CHECK(rawisp_write_histogram_csv(back, 4, hist.c_str()) == RAWISP_OK);
  CHECK(rawisp_write_histogram_csv(back, 0, hist.c_str()) == RAWISP_ERR_INVALID_ARGUMENT);
  CHECK(rawisp_read_pgm("/nonexistent/x.pgm", &meta, &back) == RAWISP_ERR_IO);

  rawisp_pipeline_config config;
  rawisp_pipeline_config_default(&config);
  CHECK(config.factor == 1);
  CHECK(config.apply_transform == 0);
  config.factor = 5;
  config.apply_transform = 1;
  config.transform = {RAWISP_TRANSFORM_YEO_JOHNSON, {0.35, 0.0}};
  config.demosaic = 1;
  rawisp_pipeline_result* result = nullptr;
  REQUIRE(rawisp_pipeline_run(img, &config, &result) == RAWISP_OK);
  CHECK(rawisp_pipeline_result_is_rgb(result) == 1);
  size_t h = 0, w = 0;
  REQUIRE(rawisp_pipeline_result_info(result, &h, &w) == RAWISP_OK);
  CHECK(h == 4);
  CHECK(w == 6);
  int has = 0;
  double scale = 0.0, offset = 1.0;
  REQUIRE(rawisp_pipeline_result_rescale(result, &has, &scale, &offset) == RAWISP_OK);
  CHECK(has == 1);
  CHECK(std::abs(scale - 4095.0 * 0.35 / std::expm1(0.35 * std::log(4096.0))) < 1e-12);
  CHECK(offset == 0.0);
  const std::string ppm = TempPath("p.ppm");
  CHECK(rawisp_pipeline_result_write(result, ppm.c_str()) == RAWISP_OK);
  rawisp_pipeline_result_destroy(result);

  config.factor = 4;
  CHECK(rawisp_pipeline_run(img, &config, &result) == RAWISP_ERR_INVALID_ARGUMENT);

  for (const auto& f : {pgm, hist, ppm}) std::filesystem::remove(f);
  rawisp_image_destroy(back);
  rawisp_image_destroy(img);
}
