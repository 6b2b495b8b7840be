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
#include "rawisp/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rawisp/error.hpp"

namespace rawisp {

namespace {

namespace fs = std::filesystem;

std::vector<unsigned char> ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream OpenForWrite(const fs::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc
                                 : std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void FinishWrite(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

// Tokenizer for the ASCII part of a netpbm header.
class HeaderReader {
 public:
  HeaderReader(const std::vector<unsigned char>& bytes, const fs::path& path)
      : bytes_(bytes), path_(path) {}

  std::string Magic() {
    if (bytes_.size() < 2) Fail("file too short for a netpbm magic number");
    pos_ = 2;
    return std::string(bytes_.begin(), bytes_.begin() + 2);
  }

  unsigned long Number(const char* what) {
    SkipSpaceAndComments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000UL) Fail(std::string(what) + " is too large");
      ++pos_;
    }
    if (pos_ == start) Fail(std::string("expected ") + what);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t RasterStart() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      Fail("expected a single whitespace byte before the raster");
    }
    return pos_ + 1;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    std::ostringstream msg;
    msg << path_.string() << ": " << what << " at byte offset " << pos_;
    throw Error(ErrorCode::kParse, msg.str());
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  const fs::path& path_;
  std::size_t pos_ = 0;
};

struct Raster {
  std::size_t width;
  std::size_t height;
  unsigned long maxval;
  std::size_t channels;
  std::vector<std::uint16_t> samples;
};

Raster ReadNetpbm(const fs::path& path, const char* expected_magic,
                  std::size_t channels) {
  const std::vector<unsigned char> bytes = ReadAll(path);
  HeaderReader header(bytes, path);
  const std::string magic = header.Magic();
  if (magic != expected_magic) {
    header.Fail("expected binary netpbm magic " + std::string(expected_magic) +
                ", found '" + magic + "'");
  }
  Raster raster;
  raster.width = header.Number("width");
  raster.height = header.Number("height");
  raster.maxval = header.Number("maxval");
  raster.channels = channels;
  if (raster.width == 0 || raster.height == 0) header.Fail("zero dimension");
  if (raster.maxval == 0 || raster.maxval > 65535) {
    header.Fail("maxval must be in [1, 65535]");
  }
  const std::size_t start = header.RasterStart();
  const std::size_t bytes_per_sample = raster.maxval > 255 ? 2 : 1;
  const std::size_t count = raster.width * raster.height * channels;
  const std::size_t expected = count * bytes_per_sample;
  const std::size_t actual = bytes.size() - start;
  if (actual < expected) {
    std::ostringstream msg;
    msg << path.string() << ": truncated pixel payload at byte offset " << start
        << ": expected " << expected << " bytes, got " << actual;
    throw Error(ErrorCode::kParse, msg.str());
  }
  raster.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (bytes_per_sample == 2) {
      raster.samples[i] = static_cast<std::uint16_t>(
          (bytes[start + 2 * i] << 8) | bytes[start + 2 * i + 1]);
    } else {
      raster.samples[i] = bytes[start + i];
    }
  }
  return raster;
}

void WriteNetpbm(const fs::path& path, const char* magic, std::size_t width,
                 std::size_t height, unsigned long maxval,
                 const std::vector<std::uint16_t>& samples) {
  std::ofstream out = OpenForWrite(path, /*binary=*/true);
  out << magic << "\n" << width << " " << height << "\n" << maxval << "\n";
  std::vector<char> raster;
  if (maxval > 255) {
    raster.reserve(samples.size() * 2);
    for (std::uint16_t s : samples) {
      raster.push_back(static_cast<char>(s >> 8));
      raster.push_back(static_cast<char>(s & 0xff));
    }
  } else {
    for (std::uint16_t s : samples) raster.push_back(static_cast<char>(s));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  FinishWrite(out, path);
}

std::string FormatNumber(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general,
                           17);
  return std::string(buf, res.ptr);
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

double ParseNumber(const std::string& text, const fs::path& path,
                   std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    std::ostringstream msg;
    msg << path.string() << ":" << line << ": cannot parse number '" << text
        << "'";
    throw Error(ErrorCode::kParse, msg.str());
  }
  return v;
}

}  // namespace

std::uint16_t Quantize(double value, double max_value) {
  if (std::isnan(value)) return 0;
  const double clamped = std::clamp(value, 0.0, max_value);
  return static_cast<std::uint16_t>(std::nearbyint(clamped));
}

std::optional<RawMetadata> ReadSidecar(const fs::path& pgm_path) {
  fs::path sidecar = pgm_path;
  sidecar += ".json";
  if (!fs::exists(sidecar)) return std::nullopt;
  std::ifstream in(sidecar);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + sidecar.string());
  RawMetadata meta;
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.contains("pattern")) {
      const auto name = doc.at("pattern").get<std::string>();
      const auto pattern = ParsePattern(name);
      if (!pattern) {
        throw Error(ErrorCode::kParse,
                    sidecar.string() + ": unknown Bayer pattern '" + name + "'");
      }
      meta.pattern = *pattern;
    }
    if (doc.contains("bit_depth")) meta.bit_depth = doc.at("bit_depth").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, sidecar.string() + ": " + e.what());
  }
  return meta;
}

void WriteSidecar(const fs::path& pgm_path, const RawMetadata& metadata) {
  fs::path sidecar = pgm_path;
  sidecar += ".json";
  std::ofstream out = OpenForWrite(sidecar, /*binary=*/false);
  const nlohmann::json doc = {
      {"pattern", std::string(PatternName(metadata.pattern))},
      {"bit_depth", metadata.bit_depth}};
  out << doc.dump(2) << "\n";
  FinishWrite(out, sidecar);
}

BayerImage ReadRawPgm(const fs::path& path, const RawMetadata& metadata) {
  Raster raster = ReadNetpbm(path, "P5", 1);
  Plane data(raster.height, raster.width);
  auto values = data.values();
  for (std::size_t i = 0; i < raster.samples.size(); ++i) {
    values[i] = raster.samples[i];
  }
  return BayerImage(std::move(data), metadata.pattern, metadata.bit_depth);
}

void WriteRawPgm(const BayerImage& image, const fs::path& path) {
  const double max_v = image.max_value();
  std::vector<std::uint16_t> samples;
  samples.reserve(image.data().size());
  for (double v : image.data().values()) samples.push_back(Quantize(v, max_v));
  WriteNetpbm(path, "P5", image.width(), image.height(),
              static_cast<unsigned long>(max_v), samples);
}

void WriteRgbPpm(const RgbImage& image, const fs::path& path, int bit_depth) {
  if (bit_depth < 1 || bit_depth > kMaxBitDepth) {
    throw Error(ErrorCode::kInvalidArgument,
                "bit depth must be in [1, 16], got " + std::to_string(bit_depth));
  }
  if (!image.r.same_shape(image.g) || !image.r.same_shape(image.b)) {
    throw Error(ErrorCode::kShape, "RGB planes differ in size");
  }
  const double max_v = MaxValueForBits(bit_depth);
  std::vector<std::uint16_t> samples;
  samples.reserve(image.r.size() * 3);
  for (std::size_t i = 0; i < image.r.size(); ++i) {
    samples.push_back(Quantize(image.r.values()[i], max_v));
    samples.push_back(Quantize(image.g.values()[i], max_v));
    samples.push_back(Quantize(image.b.values()[i], max_v));
  }
  WriteNetpbm(path, "P6", image.width(), image.height(),
              static_cast<unsigned long>(max_v), samples);
}

RgbImage ReadRgbPpm(const fs::path& path, int* bit_depth) {
  Raster raster = ReadNetpbm(path, "P6", 3);
  RgbImage out{Plane(raster.height, raster.width),
               Plane(raster.height, raster.width),
               Plane(raster.height, raster.width)};
  for (std::size_t i = 0; i < raster.width * raster.height; ++i) {
    out.r.values()[i] = raster.samples[3 * i];
    out.g.values()[i] = raster.samples[3 * i + 1];
    out.b.values()[i] = raster.samples[3 * i + 2];
  }
  if (bit_depth != nullptr) {
    *bit_depth = static_cast<int>(std::bit_width(raster.maxval));
  }
  return out;
}

void WriteTraceCsv(const TrainTrace& trace, const fs::path& path) {
  std::ofstream out = OpenForWrite(path, /*binary=*/false);
  out << "iteration,loss";
  for (std::string_view name : ParamNames(trace.kind)) out << "," << name;
  out << "\n";
  for (const TraceRecord& rec : trace.records) {
    out << rec.iteration << "," << FormatNumber(rec.loss);
    for (double p : rec.params) out << "," << FormatNumber(p);
    out << "\n";
  }
  FinishWrite(out, path);
}

TrainTrace ReadTraceCsv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kParse, path.string() + ": empty trace file");
  }
  const std::vector<std::string> header = SplitCsvLine(line);
  std::optional<TransformKind> kind;
  for (auto k : {TransformKind::kGamma, TransformKind::kErf,
                 TransformKind::kYeoJohnson}) {
    std::vector<std::string> expected = {"iteration", "loss"};
    for (auto name : ParamNames(k)) expected.emplace_back(name);
    if (expected == header) kind = k;
  }
  if (!kind) {
    throw Error(ErrorCode::kParse, path.string() + ": unrecognized header '" +
                                       line + "'");
  }
  TrainTrace trace{*kind, {}, 0.0, 0.0};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = SplitCsvLine(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParse, path.string() + ":" +
                                         std::to_string(line_no) +
                                         ": wrong number of fields");
    }
    TraceRecord rec;
    rec.iteration =
        static_cast<std::size_t>(ParseNumber(fields[0], path, line_no));
    rec.loss = ParseNumber(fields[1], path, line_no);
    for (std::size_t k = 2; k < fields.size(); ++k) {
      rec.params.push_back(ParseNumber(fields[k], path, line_no));
    }
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

std::vector<HistogramBin> Histogram(const BayerImage& image, std::size_t bins) {
  if (bins == 0) {
    throw Error(ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  }
  const double max_v = image.max_value();
  const double width = max_v / static_cast<double>(bins);
  std::vector<HistogramBin> hist(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    hist[k] = {static_cast<double>(k) * width,
               k + 1 == bins ? max_v : static_cast<double>(k + 1) * width, 0};
  }
  for (double v : image.data().values()) {
    auto k = static_cast<std::size_t>(v / max_v * static_cast<double>(bins));
    ++hist[std::min(k, bins - 1)].count;
  }
  return hist;
}

void WriteHistogramCsv(const BayerImage& image, std::size_t bins,
                       const fs::path& path) {
  const std::vector<HistogramBin> hist = Histogram(image, bins);
  std::ofstream out = OpenForWrite(path, /*binary=*/false);
  out << "bin_low,bin_high,count\n";
  for (const HistogramBin& b : hist) {
    out << FormatNumber(b.low) << "," << FormatNumber(b.high) << "," << b.count
        << "\n";
  }
  FinishWrite(out, path);
}

}  // namespace rawisp
