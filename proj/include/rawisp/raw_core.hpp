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
#ifndef RAWISP_RAW_CORE_HPP_
#define RAWISP_RAW_CORE_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "rawisp/plane.hpp"

namespace rawisp {

// Names the colors at (0,0), (0,1), (1,0), (1,1) of every 2x2 cell.
enum class BayerPattern { kRGGB, kBGGR, kGRBG, kGBRG };

enum class Channel { kR, kG, kB };

// Color of the filter at pixel (row, col).
Channel ChannelAt(BayerPattern pattern, std::size_t row, std::size_t col);

std::string_view PatternName(BayerPattern pattern);
std::optional<BayerPattern> ParsePattern(std::string_view name);

enum class CropPolicy { kRequireExact, kCropTrailing };

inline constexpr int kMaxBitDepth = 16;

// Single-plane mosaic in digital numbers. Immutable once constructed; every
// instance satisfies: even dimensions, values in [0, 2^bit_depth - 1].
class BayerImage {
 public:
  // Throws Error{kDimension} for odd/empty dimensions, Error{kRange} for any
  // value outside the bit-depth range, Error{kInvalidArgument} for a bit
  // depth outside [1, 16].
  BayerImage(Plane data, BayerPattern pattern = BayerPattern::kRGGB,
             int bit_depth = 12);

  const Plane& data() const noexcept { return data_; }
  std::size_t height() const noexcept { return data_.rows(); }
  std::size_t width() const noexcept { return data_.cols(); }
  BayerPattern pattern() const noexcept { return pattern_; }
  int bit_depth() const noexcept { return bit_depth_; }
  double max_value() const noexcept;

  double operator()(std::size_t r, std::size_t c) const noexcept {
    return data_(r, c);
  }

  friend bool operator==(const BayerImage&, const BayerImage&) = default;

 private:
  Plane data_;
  BayerPattern pattern_;
  int bit_depth_;
};

// Largest representable value for a bit depth, 2^bits - 1.
double MaxValueForBits(int bit_depth);

// Drops trailing rows and columns so both dimensions are multiples of 2d.
// Throws Error{kSize} if less than one 2d x 2d patch remains.
BayerImage CropToFactor(const BayerImage& image, int factor);

// Pattern-preserving downsampling by an odd factor d. Every 2d x 2d input
// patch becomes one 2x2 output cell; output element (i, j) of the cell is the
// mean of the ((d+1)/2)^2 patch elements at rows d*i + 2m, columns d*j + 2n.
// Output values are real means and are not re-quantized.
BayerImage DownsampleBayer(const BayerImage& image, int factor,
                           CropPolicy policy = CropPolicy::kCropTrailing);

// 1.0 where the pixel's filter is `channel`, else 0.0.
Plane ChannelMask(BayerPattern pattern, std::size_t rows, std::size_t cols,
                  Channel channel);
Plane ChannelMask(const BayerImage& image, Channel channel);

// data / (2^bit_depth - 1).
Plane NormalizeToUnit(const BayerImage& image);

}  // namespace rawisp

#endif  // RAWISP_RAW_CORE_HPP_
