/**
 * @file
 * @brief Scalar raster used for map import/export, plus its two file formats.
 *
 * Formats:
 *  - PGM: Netpbm binary greymap (P5). Samples are big-endian 16-bit words when
 *    maxval > 255 (one byte otherwise) and map linearly onto a declared world
 *    range [lo, hi]. Written files always use maxval 65535.
 *  - Float32: 16-byte header ("HGT1", u32 width, u32 height, u32 reserved = 0)
 *    followed by width*height little-endian IEEE-754 floats, row-major.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluvial/terrain.hpp"

namespace fluvial {

/// Malformed file contents. `offset` is the byte position where parsing failed.
class FormatError : public std::runtime_error {
public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Well-formed file holding non-finite samples.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Heightmap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> samples;  ///< row-major
  double range_min = 0.0;       ///< declared world range (PGM mapping)
  double range_max = 1.0;

  Heightmap() = default;
  Heightmap(std::size_t w, std::size_t h, double fill = 0.0)
      : width(w), height(h), samples(w * h, fill) {}

  double& operator()(std::size_t row, std::size_t col) { return samples[row * width + col]; }
  double operator()(std::size_t row, std::size_t col) const { return samples[row * width + col]; }

  double min() const { return samples.empty() ? 0.0 : *std::min_element(samples.begin(), samples.end()); }
  double max() const { return samples.empty() ? 0.0 : *std::max_element(samples.begin(), samples.end()); }

  /// Sets the declared range to the sample extent.
  void fit_range() {
    range_min = min();
    range_max = max();
  }
};

enum class HeightmapFormat { Pgm, Float32 };

/// Guesses the format from a path's extension: ".pgm"/".pnm" are PGM, anything else Float32.
inline HeightmapFormat format_for_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext == ".pgm" || ext == ".pnm" ? HeightmapFormat::Pgm : HeightmapFormat::Float32;
}

namespace detail {

inline std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

inline void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

inline void check_finite(const Heightmap& map) {
  for (std::size_t i = 0; i < map.samples.size(); ++i)
    if (!std::isfinite(map.samples[i]))
      throw DataError("non-finite sample at index " + std::to_string(i));
}

inline std::uint32_t load_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

inline void store_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<unsigned char>(v >> (8 * k)));
}

// Netpbm header token: skips whitespace and '#' comments, reads a decimal integer.
inline std::uint64_t pgm_number(const std::vector<unsigned char>& b, std::size_t& pos,
                                const char* field) {
  for (;;) {
    while (pos < b.size() && std::isspace(b[pos])) ++pos;
    if (pos < b.size() && b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n' && b[pos] != '\r') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  std::uint64_t v = 0;
  while (pos < b.size() && std::isdigit(b[pos]) && pos - start < 10) v = v * 10 + (b[pos++] - '0');
  if (pos == start) throw FormatError(std::string("PGM: expected ") + field, start);
  return v;
}

}  // namespace detail

inline Heightmap decode_float32(const std::vector<unsigned char>& b) {
  if (b.size() < 16)
    throw FormatError("HGT1: header needs 16 bytes, file has " + std::to_string(b.size()),
                      b.size());
  if (std::memcmp(b.data(), "HGT1", 4) != 0) throw FormatError("HGT1: bad magic", 0);
  const std::uint32_t w = detail::load_u32le(b.data() + 4);
  const std::uint32_t h = detail::load_u32le(b.data() + 8);
  if (w == 0 || h == 0) throw FormatError("HGT1: zero dimension", w == 0 ? 4 : 8);
  const std::uint64_t expected = 16 + 4ULL * w * h;
  if (b.size() != expected)
    throw FormatError("HGT1: expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(b.size()),
                      std::min<std::uint64_t>(b.size(), expected));
  Heightmap map(w, h);
  for (std::size_t i = 0; i < map.samples.size(); ++i) {
    const std::uint32_t bits = detail::load_u32le(b.data() + 16 + 4 * i);
    map.samples[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  detail::check_finite(map);
  map.fit_range();
  return map;
}

inline std::vector<unsigned char> encode_float32(const Heightmap& map) {
  detail::check_finite(map);
  std::vector<unsigned char> out{'H', 'G', 'T', '1'};
  out.reserve(16 + 4 * map.samples.size());
  detail::store_u32le(out, static_cast<std::uint32_t>(map.width));
  detail::store_u32le(out, static_cast<std::uint32_t>(map.height));
  detail::store_u32le(out, 0);
  for (double v : map.samples) detail::store_u32le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

/// Decodes a P5 greymap, mapping sample/maxval linearly onto [lo, hi].
inline Heightmap decode_pgm(const std::vector<unsigned char>& b, double lo, double hi) {
  if (b.size() < 2 || b[0] != 'P' || b[1] != '5') throw FormatError("PGM: bad magic, expected P5", 0);
  std::size_t pos = 2;
  const std::uint64_t w = detail::pgm_number(b, pos, "width");
  const std::uint64_t h = detail::pgm_number(b, pos, "height");
  const std::size_t maxval_pos = pos;
  const std::uint64_t maxval = detail::pgm_number(b, pos, "maxval");
  if (w == 0 || h == 0) throw FormatError("PGM: zero dimension", 2);
  if (maxval == 0 || maxval > 65535) throw FormatError("PGM: maxval out of range", maxval_pos);
  if (pos >= b.size() || !std::isspace(b[pos]))
    throw FormatError("PGM: expected whitespace after maxval", pos);
  ++pos;
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  const std::uint64_t expected = pos + bytes_per * w * h;
  if (b.size() < expected)
    throw FormatError("PGM: expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(b.size()),
                      b.size());
  Heightmap map(w, h);
  map.range_min = lo;
  map.range_max = hi;
  const double scale = (hi - lo) / static_cast<double>(maxval);
  for (std::size_t i = 0; i < map.samples.size(); ++i) {
    const unsigned char* p = b.data() + pos + bytes_per * i;
    const unsigned v = bytes_per == 2 ? (unsigned{p[0]} << 8 | p[1]) : p[0];
    if (v > maxval) throw FormatError("PGM: sample exceeds maxval", pos + bytes_per * i);
    map.samples[i] = lo + scale * v;
  }
  return map;
}

/// Encodes as 16-bit P5 over [lo, hi]; samples outside the range saturate.
inline std::vector<unsigned char> encode_pgm(const Heightmap& map, double lo, double hi) {
  detail::check_finite(map);
  const std::string header =
      "P5\n" + std::to_string(map.width) + " " + std::to_string(map.height) + "\n65535\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(out.size() + 2 * map.samples.size());
  const double span = hi - lo;
  for (double v : map.samples) {
    double q = span > 0.0 ? (v - lo) / span * 65535.0 : 0.0;
    q = std::clamp(std::round(q), 0.0, 65535.0);
    const auto word = static_cast<std::uint16_t>(q);
    out.push_back(static_cast<unsigned char>(word >> 8));
    out.push_back(static_cast<unsigned char>(word & 0xFF));
  }
  return out;
}

/// Reads a heightmap. For PGM the declared world range is [lo, hi].
inline Heightmap read_heightmap(const std::filesystem::path& path, HeightmapFormat format,
                                double lo = 0.0, double hi = 1.0) {
  const auto bytes = detail::read_file(path);
  return format == HeightmapFormat::Pgm ? decode_pgm(bytes, lo, hi) : decode_float32(bytes);
}

/// Writes a heightmap. PGM output quantizes over the map's declared range.
inline void write_heightmap(const Heightmap& map, const std::filesystem::path& path,
                            HeightmapFormat format) {
  detail::write_file(path, format == HeightmapFormat::Pgm
                               ? encode_pgm(map, map.range_min, map.range_max)
                               : encode_float32(map));
}

}  // namespace fluvial
