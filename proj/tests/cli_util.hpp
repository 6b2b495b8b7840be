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
#ifndef RAWISP_TESTS_CLI_UTIL_HPP_
#define RAWISP_TESTS_CLI_UTIL_HPP_

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "rawisp/demosaic.hpp"
#include "rawisp/io.hpp"
#include "rawisp/learnable_ops.hpp"
#include "rawisp/raw_core.hpp"

namespace testutil {

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

inline std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Runs the CLI binary with the given arguments, capturing both streams.
inline CliRun RunCli(const std::string& binary, const std::vector<std::string>& args,
                     const std::filesystem::path& scratch) {
  const auto out_path = scratch / "cli_stdout.txt";
  const auto err_path = scratch / "cli_stderr.txt";
  std::ostringstream cmd;
  cmd << ShellQuote(binary);
  for (const auto& a : args) cmd << " " << ShellQuote(a);
  cmd << " >" << ShellQuote(out_path.string()) << " 2>" << ShellQuote(err_path.string());
  const int status = std::system(cmd.str().c_str());
  CliRun run;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  run.out = Slurp(out_path);
  run.err = Slurp(err_path);
  return run;
}

// read -> downsample -> transform -> rescale -> [demosaic] -> quantize -> write,
// spelled out with the individual library operations.
inline void ComposePipeline(const std::filesystem::path& in, const rawisp::RawMetadata& meta,
                            int factor, const rawisp::TransformParams& params,
                            bool demosaic, const std::filesystem::path& out) {
  using namespace rawisp;
  const BayerImage reduced = DownsampleBayer(ReadRawPgm(in, meta), factor);
  const double max_v = reduced.max_value();
  const TransformKind kind = KindOf(params);
  const bool dn_scale = kind == TransformKind::kYeoJohnson;
  const Plane x = dn_scale ? reduced.data() : NormalizeToUnit(reduced);
  const double lo = ForwardScalar(params, 0.0);
  const double hi = ForwardScalar(params, dn_scale ? max_v : 1.0);
  const double scale = max_v / (hi - lo);
  const double offset = 0.0 - lo * scale;
  auto rescale = [&](Plane p) {
    for (double& v : p.values()) v = std::clamp(scale * v + offset, 0.0, max_v);
    return p;
  };
  if (!demosaic) {
    WriteRawPgm(BayerImage(rescale(Forward(params, x)), reduced.pattern(), reduced.bit_depth()),
                out);
    return;
  }
  RgbImage rgb;
  if (kind == TransformKind::kGamma) {
    const RgbImage lin = BilinearDemosaic(x, reduced.pattern());
    rgb = {Forward(params, lin.r), Forward(params, lin.g), Forward(params, lin.b)};
  } else {
    rgb = BilinearDemosaic(Forward(params, x), reduced.pattern());
  }
  WriteRgbPpm({rescale(rgb.r), rescale(rgb.g), rescale(rgb.b)}, out, reduced.bit_depth());
}

}  // namespace testutil

#endif  // RAWISP_TESTS_CLI_UTIL_HPP_
