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
// Command-line front end. Talks to the library exclusively through rawisp.h.

#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rawisp/rawisp.h"

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

// Carries the failing stage out of a subcommand.
struct StageFailure {
  std::string stage;
  rawisp_status status;
  std::string message;
};

void Check(rawisp_status status, const std::string& stage) {
  if (status != RAWISP_OK) {
    throw StageFailure{stage, status, rawisp_last_error()};
  }
}

struct ImageDeleter {
  void operator()(rawisp_image* p) const { rawisp_image_destroy(p); }
};
struct RgbDeleter {
  void operator()(rawisp_rgb* p) const { rawisp_rgb_destroy(p); }
};
struct TraceDeleter {
  void operator()(rawisp_trace* p) const { rawisp_trace_destroy(p); }
};
struct ResultDeleter {
  void operator()(rawisp_pipeline_result* p) const {
    rawisp_pipeline_result_destroy(p);
  }
};
using ImagePtr = std::unique_ptr<rawisp_image, ImageDeleter>;
using RgbPtr = std::unique_ptr<rawisp_rgb, RgbDeleter>;
using TracePtr = std::unique_ptr<rawisp_trace, TraceDeleter>;
using ResultPtr = std::unique_ptr<rawisp_pipeline_result, ResultDeleter>;

const std::map<std::string, rawisp_pattern> kPatterns = {
    {"RGGB", RAWISP_PATTERN_RGGB},
    {"BGGR", RAWISP_PATTERN_BGGR},
    {"GRBG", RAWISP_PATTERN_GRBG},
    {"GBRG", RAWISP_PATTERN_GBRG}};
const std::map<std::string, rawisp_border> kBorders = {
    {"renormalize", RAWISP_BORDER_RENORMALIZE}, {"zero", RAWISP_BORDER_ZERO}};
const std::map<std::string, rawisp_crop_policy> kCrops = {
    {"trailing", RAWISP_CROP_TRAILING}, {"exact", RAWISP_CROP_REQUIRE_EXACT}};
const std::map<std::string, rawisp_transform_kind> kKinds = {
    {"gamma", RAWISP_TRANSFORM_GAMMA},
    {"erf", RAWISP_TRANSFORM_ERF},
    {"yj", RAWISP_TRANSFORM_YEO_JOHNSON}};

// --in plus the metadata flags that PGM cannot carry.
struct InputOptions {
  std::string path;
  std::string pattern;  // empty: sidecar or RGGB
  int bits = 0;         // 0: sidecar or 12

  void Register(CLI::App* cmd) {
    cmd->add_option("--in", path, "Input binary PGM (P5)")->required();
    cmd->add_option("--pattern", pattern, "Bayer pattern (default: sidecar or RGGB)")
        ->check(CLI::IsMember(kPatterns));
    cmd->add_option("--bits", bits, "Bit depth (default: sidecar or 12)")
        ->check(CLI::Range(1, 16));
  }

  ImagePtr Load() const {
    rawisp_metadata meta{RAWISP_PATTERN_RGGB, 12};
    int found = 0;
    Check(rawisp_read_sidecar(path.c_str(), &meta, &found), "read sidecar");
    if (!pattern.empty()) meta.pattern = kPatterns.at(pattern);
    if (bits != 0) meta.bit_depth = bits;
    rawisp_image* raw = nullptr;
    Check(rawisp_read_pgm(path.c_str(), &meta, &raw), "read");
    return ImagePtr(raw);
  }
};

struct TransformOptions {
  std::string kind = "none";
  std::optional<double> gamma;
  std::optional<double> mu;
  std::optional<double> sigma;
  std::optional<double> lambda;

  void Register(CLI::App* cmd, bool allow_none, bool required) {
    std::vector<std::string> choices = {"gamma", "erf", "yj"};
    if (allow_none) choices.insert(choices.begin(), "none");
    auto* opt = cmd->add_option("--transform", kind, "Point-wise transform")
                    ->check(CLI::IsMember(choices));
    if (required) opt->required();
    cmd->add_option("--gamma", gamma, "Gamma exponent (default 1.0)");
    cmd->add_option("--mu", mu, "Erf centre (default 1.0)");
    cmd->add_option("--sigma", sigma, "Erf width (default 1.0)");
    cmd->add_option("--lambda", lambda, "Yeo-Johnson lambda (default 0.35)");
  }

  std::optional<rawisp_params> Params() const {
    if (kind == "none") return std::nullopt;
    const rawisp_transform_kind k = kKinds.at(kind);
    rawisp_params params{};
    Check(rawisp_default_params(k, &params), "transform parameters");
    switch (k) {
      case RAWISP_TRANSFORM_GAMMA:
        if (gamma) params.values[0] = *gamma;
        break;
      case RAWISP_TRANSFORM_ERF:
        if (mu) params.values[0] = *mu;
        if (sigma) params.values[1] = *sigma;
        break;
      case RAWISP_TRANSFORM_YEO_JOHNSON:
        if (lambda) params.values[0] = *lambda;
        break;
    }
    return params;
  }
};

void RunPipelineCommand(const rawisp_image* image,
                        const rawisp_pipeline_config& config,
                        const std::string& out_path) {
  rawisp_pipeline_result* raw = nullptr;
  Check(rawisp_pipeline_run(image, &config, &raw), "pipeline");
  ResultPtr result(raw);
  int has_rescale = 0;
  double scale = 1.0;
  double offset = 0.0;
  Check(rawisp_pipeline_result_rescale(result.get(), &has_rescale, &scale,
                                       &offset),
        "pipeline");
  if (has_rescale) {
    std::fprintf(stderr, "rescale: stored = %.17g * y + %.17g\n", scale, offset);
  }
  Check(rawisp_pipeline_result_write(result.get(), out_path.c_str()), "write");
  std::size_t h = 0;
  std::size_t w = 0;
  Check(rawisp_pipeline_result_info(result.get(), &h, &w), "pipeline");
  std::printf("wrote %s (%zux%zu%s)\n", out_path.c_str(), h, w,
              rawisp_pipeline_result_is_rgb(result.get()) ? ", RGB" : "");
}

std::vector<std::string> ParamLabels(rawisp_transform_kind k) {
  switch (k) {
    case RAWISP_TRANSFORM_GAMMA:
      return {"gamma"};
    case RAWISP_TRANSFORM_ERF:
      return {"mu", "sigma"};
    case RAWISP_TRANSFORM_YEO_JOHNSON:
      return {"lambda"};
  }
  return {};
}

std::string KindLabel(rawisp_transform_kind k) {
  for (const auto& [name, kind] : kKinds) {
    if (kind == k) return name;
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RAW Bayer downsampling, demosaicing and learnable tone transforms",
               "rawisp"};
  app.require_subcommand(1);

  // downsample
  InputOptions ds_in;
  int ds_factor = 1;
  rawisp_crop_policy ds_crop = RAWISP_CROP_TRAILING;
  std::string ds_out;
  auto* ds = app.add_subcommand("downsample", "Bayer-pattern-preserving downsampling");
  ds_in.Register(ds);
  ds->add_option("--d", ds_factor, "Odd downsampling factor")->required();
  ds->add_option("--crop", ds_crop, "trailing | exact")
      ->transform(CLI::CheckedTransformer(kCrops));
  ds->add_option("--out", ds_out, "Output PGM")->required();

  // demosaic
  InputOptions dm_in;
  rawisp_border dm_border = RAWISP_BORDER_RENORMALIZE;
  std::string dm_out;
  auto* dm = app.add_subcommand("demosaic", "Bilinear demosaic to a PPM");
  dm_in.Register(dm);
  dm->add_option("--border", dm_border, "renormalize | zero")
      ->transform(CLI::CheckedTransformer(kBorders));
  dm->add_option("--out", dm_out, "Output PPM")->required();

  // transform
  InputOptions tf_in;
  TransformOptions tf_opts;
  std::string tf_out;
  auto* tf = app.add_subcommand("transform", "Apply a point-wise transform");
  tf_in.Register(tf);
  tf_opts.Register(tf, /*allow_none=*/false, /*required=*/true);
  tf->add_option("--out", tf_out, "Output PGM")->required();

  // pipeline
  InputOptions pl_in;
  TransformOptions pl_opts;
  int pl_factor = 1;
  rawisp_crop_policy pl_crop = RAWISP_CROP_TRAILING;
  bool pl_demosaic = false;
  rawisp_border pl_border = RAWISP_BORDER_RENORMALIZE;
  std::string pl_out;
  auto* pl = app.add_subcommand(
      "pipeline", "read -> crop -> downsample -> transform -> [demosaic] -> write");
  pl_in.Register(pl);
  pl_opts.Register(pl, /*allow_none=*/true, /*required=*/false);
  pl->add_option("--d", pl_factor, "Odd downsampling factor");
  pl->add_option("--crop", pl_crop, "trailing | exact")
      ->transform(CLI::CheckedTransformer(kCrops));
  pl->add_flag("--demosaic", pl_demosaic, "Demosaic and write a PPM");
  pl->add_option("--border", pl_border, "renormalize | zero")
      ->transform(CLI::CheckedTransformer(kBorders));
  pl->add_option("--out", pl_out, "Output PGM or PPM")->required();

  // fit-lambda
  InputOptions fit_in;
  double fit_lo = 1e-3;
  double fit_hi = 3.0;
  double fit_tol = 1e-4;
  auto* fit = app.add_subcommand("fit-lambda",
                                 "Maximum-likelihood Yeo-Johnson lambda of the pixel values");
  fit_in.Register(fit);
  fit->add_option("--lo", fit_lo, "Search interval start");
  fit->add_option("--hi", fit_hi, "Search interval end");
  fit->add_option("--tol", fit_tol, "Tolerance in lambda");

  // grad-check
  std::uint64_t gc_seed = 0;
  std::size_t gc_draws = 100;
  auto* gc = app.add_subcommand("grad-check",
                                "Finite-difference check of every transform gradient");
  gc->add_option("--seed", gc_seed, "Random seed");
  gc->add_option("--draws", gc_draws, "Random draws per transform");

  // train-toy
  rawisp_train_config tt_cfg;
  rawisp_train_config_default(&tt_cfg);
  TransformOptions tt_opts;
  tt_opts.kind = "yj";
  std::string tt_out;
  auto* tt = app.add_subcommand("train-toy",
                                "Joint gradient descent on the toy dark-tone task");
  tt_opts.Register(tt, /*allow_none=*/false, /*required=*/false);
  tt->add_option("--lr", tt_cfg.learning_rate, "Learning rate");
  tt->add_option("--iterations", tt_cfg.iterations, "Gradient steps");
  tt->add_option("--seed", tt_cfg.seed, "Data seed");
  tt->add_option("--floor", tt_cfg.param_floor, "Positivity floor");
  tt->add_option("--samples", tt_cfg.samples_per_class, "Samples per class");
  tt->add_option("--out", tt_out, "Trace CSV");

  // histogram
  InputOptions hist_in;
  std::size_t hist_bins = 64;
  std::string hist_out;
  auto* hist = app.add_subcommand("histogram", "Pixel-value histogram as CSV");
  hist_in.Register(hist);
  hist->add_option("--bins", hist_bins, "Number of uniform bins");
  hist->add_option("--out", hist_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == ds) {
      ImagePtr image = ds_in.Load();
      rawisp_image* raw = nullptr;
      Check(rawisp_downsample(image.get(), ds_factor, ds_crop, &raw), "downsample");
      ImagePtr out(raw);
      Check(rawisp_write_pgm(out.get(), ds_out.c_str()), "write");
      std::size_t h = 0;
      std::size_t w = 0;
      Check(rawisp_image_info(out.get(), &h, &w, nullptr, nullptr), "downsample");
      std::printf("wrote %s (%zux%zu)\n", ds_out.c_str(), h, w);
    } else if (active == dm) {
      ImagePtr image = dm_in.Load();
      rawisp_rgb* raw = nullptr;
      Check(rawisp_demosaic(image.get(), dm_border, &raw), "demosaic");
      RgbPtr rgb(raw);
      int bits = 0;
      Check(rawisp_image_info(image.get(), nullptr, nullptr, nullptr, &bits),
            "demosaic");
      Check(rawisp_write_ppm(rgb.get(), dm_out.c_str(), bits), "write");
      std::printf("wrote %s\n", dm_out.c_str());
    } else if (active == tf || active == pl) {
      const bool is_pipeline = active == pl;
      ImagePtr image = (is_pipeline ? pl_in : tf_in).Load();
      rawisp_pipeline_config config;
      rawisp_pipeline_config_default(&config);
      if (is_pipeline) {
        config.factor = pl_factor;
        config.crop = pl_crop;
        config.demosaic = pl_demosaic ? 1 : 0;
        config.border = pl_border;
      }
      if (auto params = (is_pipeline ? pl_opts : tf_opts).Params()) {
        config.apply_transform = 1;
        config.transform = *params;
      }
      RunPipelineCommand(image.get(), config, is_pipeline ? pl_out : tf_out);
    } else if (active == fit) {
      ImagePtr image = fit_in.Load();
      std::size_t h = 0;
      std::size_t w = 0;
      const double* data = nullptr;
      Check(rawisp_image_info(image.get(), &h, &w, nullptr, nullptr), "fit");
      Check(rawisp_image_data(image.get(), &data), "fit");
      double lambda = 0.0;
      Check(rawisp_fit_lambda(data, h * w, fit_lo, fit_hi, fit_tol, &lambda), "fit");
      double ll = 0.0;
      Check(rawisp_yj_loglik(data, h * w, lambda, &ll), "fit");
      std::printf("lambda %.9g\nloglik %.9g\n", lambda, ll);
    } else if (active == gc) {
      constexpr double kTolerance = 1e-5;
      bool ok = true;
      for (const auto& [name, kind] : kKinds) {
        rawisp_grad_check_result r{};
        Check(rawisp_grad_check(kind, gc_draws, gc_seed, &r), "grad-check");
        const double worst = r.max_param_rel_error > r.max_input_rel_error
                                 ? r.max_param_rel_error
                                 : r.max_input_rel_error;
        ok = ok && worst < kTolerance;
        std::printf("%-6s max_rel_error %.3e (params %.3e, inputs %.3e, draws %zu)\n",
                    name.c_str(), worst, r.max_param_rel_error,
                    r.max_input_rel_error, r.draws);
      }
      if (!ok) {
        std::fprintf(stderr, "rawisp grad-check: gradient error above %.0e\n",
                     kTolerance);
        return kExitData;
      }
    } else if (active == tt) {
      const auto params = tt_opts.Params();
      tt_cfg.kind = params->kind;
      if (tt_opts.gamma || tt_opts.mu || tt_opts.sigma || tt_opts.lambda) {
        tt_cfg.use_initial_params = 1;
        tt_cfg.initial_params = *params;
      }
      rawisp_trace* raw = nullptr;
      Check(rawisp_train_toy(&tt_cfg, &raw), "train");
      TracePtr trace(raw);
      const std::size_t n = rawisp_trace_length(trace.get());
      double first_loss = 0.0;
      double last_loss = 0.0;
      double first[2] = {0.0, 0.0};
      double last[2] = {0.0, 0.0};
      std::size_t n_params = 0;
      Check(rawisp_trace_record(trace.get(), 0, nullptr, &first_loss, first,
                                &n_params),
            "train");
      Check(rawisp_trace_record(trace.get(), n - 1, nullptr, &last_loss, last,
                                nullptr),
            "train");
      std::printf("transform %s, %zu iterations\n",
                  KindLabel(tt_cfg.kind).c_str(), n);
      std::printf("loss %.9g -> %.9g\n", first_loss, last_loss);
      const std::vector<std::string> labels = ParamLabels(tt_cfg.kind);
      for (std::size_t k = 0; k < n_params && k < labels.size(); ++k) {
        std::printf("%s %.9g -> %.9g\n", labels[k].c_str(), first[k], last[k]);
      }
      if (!tt_out.empty()) {
        Check(rawisp_write_trace_csv(trace.get(), tt_out.c_str()), "write");
      }
    } else if (active == hist) {
      ImagePtr image = hist_in.Load();
      Check(rawisp_write_histogram_csv(image.get(), hist_bins, hist_out.c_str()),
            "histogram");
      std::printf("wrote %s\n", hist_out.c_str());
    }
  } catch (const StageFailure& f) {
    std::fprintf(stderr, "rawisp %s: %s failed (%s): %s\n",
                 active->get_name().c_str(), f.stage.c_str(),
                 rawisp_status_name(f.status), f.message.c_str());
    return kExitData;
  }
  return 0;
}
