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
#ifndef RAWISP_IO_HPP_
#define RAWISP_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>

#include "rawisp/demosaic.hpp"
#include "rawisp/fitting.hpp"
#include "rawisp/raw_core.hpp"

namespace rawisp {

// Binary netpbm I/O. Samples wider than 8 bits are big-endian 16-bit words;
// real values are clamped to [0, 2^bits - 1] and rounded half-to-even.

// Mosaic metadata that PGM cannot carry.
struct RawMetadata {
  BayerPattern pattern = BayerPattern::kRGGB;
  int bit_depth = 12;
};

// Reads `<pgm>.json` ({"pattern": "RGGB", "bit_depth": 12}) when it exists.
// Missing keys keep their defaults. Throws Error{kParse} on malformed JSON.
std::optional<RawMetadata> ReadSidecar(const std::filesystem::path& pgm_path);
void WriteSidecar(const std::filesystem::path& pgm_path,
                  const RawMetadata& metadata);

// Reads a P5 image. Throws Error{kParse} (with the byte offset) for a
// malformed header or short payload, Error{kRange} for out-of-range pixels,
// Error{kIo} if the file cannot be opened.
BayerImage ReadRawPgm(const std::filesystem::path& path,
                      const RawMetadata& metadata);

// Writes a P5 image with maxval 2^bit_depth - 1.
void WriteRawPgm(const BayerImage& image, const std::filesystem::path& path);

// Writes a P6 image with maxval 2^bit_depth - 1.
void WriteRgbPpm(const RgbImage& image, const std::filesystem::path& path,
                 int bit_depth);

// Reads a P6 image back into planes (integer-valued).
RgbImage ReadRgbPpm(const std::filesystem::path& path, int* bit_depth = nullptr);

// Clamp to [0, max_value] then round half-to-even.
std::uint16_t Quantize(double value, double max_value);

// CSV exports. Numbers use the shortest round-trip representation.
void WriteTraceCsv(const TrainTrace& trace, const std::filesystem::path& path);
TrainTrace ReadTraceCsv(const std::filesystem::path& path);

void WriteHistogramCsv(const BayerImage& image, std::size_t bins,
                       const std::filesystem::path& path);

struct HistogramBin {
  double low;
  double high;
  std::size_t count;
};
// Uniform bins over [0, 2^bit_depth - 1]; the top edge belongs to the last bin.
std::vector<HistogramBin> Histogram(const BayerImage& image, std::size_t bins);

}  // namespace rawisp

#endif  // RAWISP_IO_HPP_
