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
#include "rawisp/raw_core.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "rawisp/error.hpp"

namespace rawisp {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension: return "dimension error";
    case ErrorCode::kRange: return "range error";
    case ErrorCode::kSize: return "size error";
    case ErrorCode::kAlignment: return "alignment error";
    case ErrorCode::kShape: return "shape error";
    case ErrorCode::kParameterDomain: return "parameter-domain error";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kDegenerate: return "degeneracy error";
    case ErrorCode::kEvaluation: return "evaluation error";
    case ErrorCode::kDivergence: return "divergence error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kIo: return "I/O error";
    case ErrorCode::kInvalidArgument: return "invalid argument";
  }
  return "unknown error";
}

Plane::Plane(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    std::ostringstream msg;
    msg << "plane " << rows << "x" << cols << " needs " << rows * cols
        << " values, got " << data_.size();
    throw Error(ErrorCode::kShape, msg.str());
  }
}

namespace {

// Cell layouts indexed by (row & 1) * 2 + (col & 1).
constexpr std::array<Channel, 4> CellLayout(BayerPattern pattern) {
  using enum Channel;
  switch (pattern) {
    case BayerPattern::kRGGB: return {kR, kG, kG, kB};
    case BayerPattern::kBGGR: return {kB, kG, kG, kR};
    case BayerPattern::kGRBG: return {kG, kR, kB, kG};
    case BayerPattern::kGBRG: return {kG, kB, kR, kG};
  }
  return {kR, kG, kG, kB};
}

void CheckFactor(int factor) {
  if (factor < 1 || factor % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "downsampling factor must be an odd positive integer, got " +
                    std::to_string(factor));
  }
}

}  // namespace

Channel ChannelAt(BayerPattern pattern, std::size_t row, std::size_t col) {
  return CellLayout(pattern)[(row & 1) * 2 + (col & 1)];
}

std::string_view PatternName(BayerPattern pattern) {
  switch (pattern) {
    case BayerPattern::kRGGB: return "RGGB";
    case BayerPattern::kBGGR: return "BGGR";
    case BayerPattern::kGRBG: return "GRBG";
    case BayerPattern::kGBRG: return "GBRG";
  }
  return "RGGB";
}

std::optional<BayerPattern> ParsePattern(std::string_view name) {
  for (auto p : {BayerPattern::kRGGB, BayerPattern::kBGGR, BayerPattern::kGRBG,
                 BayerPattern::kGBRG}) {
    if (PatternName(p) == name) return p;
  }
  return std::nullopt;
}

double MaxValueForBits(int bit_depth) {
  return std::ldexp(1.0, bit_depth) - 1.0;
}

BayerImage::BayerImage(Plane data, BayerPattern pattern, int bit_depth)
    : data_(std::move(data)), pattern_(pattern), bit_depth_(bit_depth) {
  if (bit_depth_ < 1 || bit_depth_ > kMaxBitDepth) {
    throw Error(ErrorCode::kInvalidArgument,
                "bit depth must be in [1, 16], got " +
                    std::to_string(bit_depth_));
  }
  if (data_.rows() == 0 || data_.cols() == 0 || data_.rows() % 2 != 0 ||
      data_.cols() % 2 != 0) {
    std::ostringstream msg;
    msg << "Bayer image needs positive even dimensions, got " << data_.rows()
        << "x" << data_.cols();
    throw Error(ErrorCode::kDimension, msg.str());
  }
  const double max_v = max_value();
  for (std::size_t r = 0; r < data_.rows(); ++r) {
    for (std::size_t c = 0; c < data_.cols(); ++c) {
      const double v = data_(r, c);
      if (!(v >= 0.0 && v <= max_v)) {
        std::ostringstream msg;
        msg << "value " << v << " at (" << r << ", " << c
            << ") outside [0, " << max_v << "] for " << bit_depth_
            << "-bit data";
        throw Error(ErrorCode::kRange, msg.str());
      }
    }
  }
}

double BayerImage::max_value() const noexcept {
  return MaxValueForBits(bit_depth_);
}

BayerImage CropToFactor(const BayerImage& image, int factor) {
  CheckFactor(factor);
  const std::size_t patch = 2 * static_cast<std::size_t>(factor);
  const std::size_t rows = image.height() - image.height() % patch;
  const std::size_t cols = image.width() - image.width() % patch;
  if (rows < patch || cols < patch) {
    std::ostringstream msg;
    msg << image.height() << "x" << image.width()
        << " image is smaller than one " << patch << "x" << patch << " patch";
    throw Error(ErrorCode::kSize, msg.str());
  }
  if (rows == image.height() && cols == image.width()) return image;

  Plane cropped(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) cropped(r, c) = image(r, c);
  }
  return BayerImage(std::move(cropped), image.pattern(), image.bit_depth());
}

BayerImage DownsampleBayer(const BayerImage& image, int factor,
                           CropPolicy policy) {
  CheckFactor(factor);
  const std::size_t d = static_cast<std::size_t>(factor);
  const std::size_t patch = 2 * d;
  // Too-small images are a size error under either policy.
  const BayerImage source = CropToFactor(image, factor);
  if (policy == CropPolicy::kRequireExact &&
      (image.height() % patch != 0 || image.width() % patch != 0)) {
    std::ostringstream msg;
    msg << image.height() << "x" << image.width()
        << " image is not divisible into " << patch << "x" << patch
        << " patches";
    throw Error(ErrorCode::kAlignment, msg.str());
  }
  if (d == 1) return source;

  const std::size_t taps = (d + 1) / 2;
  const double count = static_cast<double>(taps * taps);
  const std::size_t out_rows = source.height() / d;
  const std::size_t out_cols = source.width() / d;
  Plane out(out_rows, out_cols);
  for (std::size_t pr = 0; pr < out_rows / 2; ++pr) {
    for (std::size_t pc = 0; pc < out_cols / 2; ++pc) {
      const std::size_t r0 = pr * patch;
      const std::size_t c0 = pc * patch;
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
          double sum = 0.0;
          for (std::size_t m = 0; m < taps; ++m) {
            for (std::size_t n = 0; n < taps; ++n) {
              sum += source(r0 + d * i + 2 * m, c0 + d * j + 2 * n);
            }
          }
          out(2 * pr + i, 2 * pc + j) = sum / count;
        }
      }
    }
  }
  return BayerImage(std::move(out), source.pattern(), source.bit_depth());
}

Plane ChannelMask(BayerPattern pattern, std::size_t rows, std::size_t cols,
                  Channel channel) {
  Plane mask(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      mask(r, c) = ChannelAt(pattern, r, c) == channel ? 1.0 : 0.0;
    }
  }
  return mask;
}

Plane ChannelMask(const BayerImage& image, Channel channel) {
  return ChannelMask(image.pattern(), image.height(), image.width(), channel);
}

Plane NormalizeToUnit(const BayerImage& image) {
  Plane out = image.data();
  const double scale = image.max_value();
  for (double& v : out.values()) v /= scale;
  return out;
}

}  // namespace rawisp
