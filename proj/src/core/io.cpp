#include "coopdyn/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "coopdyn/error.hpp"

namespace coopdyn::io {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::io, "sha256: digest computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[digest[k] >> 4]);
    out.push_back(hex[digest[k] & 15]);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string encode_pgm(int width, int height, const std::vector<std::uint16_t>& pixels, int maxval) {
  require(width > 0 && height > 0 && pixels.size() == static_cast<std::size_t>(width) * height,
          "pgm: pixel count does not match the image size");
  require(maxval >= 1 && maxval <= 65535, "pgm: maxval out of range");
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n" + std::to_string(maxval) + "\n";
  const bool wide = maxval > 255;
  out.reserve(out.size() + pixels.size() * (wide ? 2 : 1));
  for (std::uint16_t p : pixels) {
    if (wide) out.push_back(static_cast<char>(p >> 8));
    out.push_back(static_cast<char>(p & 0xFF));
  }
  return out;
}

namespace {

// Pixel (x, y) of the raster is grid node (i = x, j = n - 1 - y).
template <class F>
std::vector<std::uint16_t> raster(const GridGeometry& g, F&& gray) {
  const int n = g.resolution;
  std::vector<std::uint16_t> px(g.cells());
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      px[static_cast<std::size_t>(y) * n + x] = gray(g.index(x, n - 1 - y));
  return px;
}

json raster_layout(const GridGeometry& g) {
  return {{"geometry", to_json(g)},
          {"orientation", "row 0 is the top edge (largest imaginary part); column 0 is the left edge"}};
}

}  // namespace

std::vector<Artifact> grid_function_pgm(const GridFunction& f, const std::string& stem) {
  const GridGeometry& g = f.geometry;
  double lo = f.values.empty() ? 0.0 : f.values[0], hi = lo;
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double scale = hi > lo ? (hi - lo) / 65535.0 : 0.0;
  auto px = raster(g, [&](std::size_t c) {
    if (scale == 0.0) return std::uint16_t{0};
    return static_cast<std::uint16_t>(std::lround(std::clamp((f.values[c] - lo) / scale, 0.0, 65535.0)));
  });
  json side = raster_layout(g);
  side["name"] = f.name;
  side["value_map"] = {{"offset", lo}, {"scale", scale}, {"formula", "value = offset + scale * gray"}};
  if (f.has_infinity) side["value_at_infinity"] = f.value_at_infinity;
  side["iterations"] = f.iterations;
  return {{stem + ".pgm", encode_pgm(g.resolution, g.resolution, px, 65535)}, {stem + ".json", dump_json(side)}};
}

std::vector<Artifact> labels_pgm(const BasinLabelGrid& basins, const std::string& stem) {
  const auto count = static_cast<double>(basins.sets.size());
  auto px = raster(basins.geometry, [&](std::size_t c) {
    const std::int32_t l = basins.labels[c];
    if (l < 0) return std::uint16_t{0};
    return static_cast<std::uint16_t>(std::lround(255.0 * (l + 1) / count));
  });
  json side = raster_layout(basins.geometry);
  json legend = json::array();
  legend.push_back({{"gray", 0}, {"label", "undecided"}});
  for (std::size_t k = 0; k < basins.sets.size(); ++k)
    legend.push_back({{"gray", std::lround(255.0 * static_cast<double>(k + 1) / count)},
                      {"label", basins.sets[k].at_infinity ? std::string("infinity") : "set " + std::to_string(k)}});
  side["legend"] = legend;
  side["depth"] = basins.depth;
  side["n_words"] = basins.n_words;
  side["capture_tolerance"] = basins.capture_tolerance;
  return {{stem + ".pgm", encode_pgm(basins.geometry.resolution, basins.geometry.resolution, px, 255)},
          {stem + ".json", dump_json(side)}};
}

Artifact mask_pgm(const std::vector<std::uint8_t>& mask, const GridGeometry& geometry, const std::string& name) {
  require(mask.size() == geometry.cells(), "mask: size does not match the grid");
  auto px = raster(geometry, [&](std::size_t c) { return static_cast<std::uint16_t>(mask[c] ? 255 : 0); });
  return {name, encode_pgm(geometry.resolution, geometry.resolution, px, 255)};
}

std::string cloud_csv(const PointCloud& cloud) {
  std::string out = "re,im,weight\n";
  const double uniform = cloud.empty() ? 0.0 : 1.0 / static_cast<double>(cloud.size());
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const double w = cloud.weights.empty() ? uniform : cloud.weights[k];
    const SpherePoint& p = cloud.points[k];
    if (p.is_infinity()) out += "inf,inf,";
    else out += format_double(p.value().real()) + "," + format_double(p.value().imag()) + ",";
    out += format_double(w) + "\n";
  }
  return out;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json to_json(const SpherePoint& p) {
  if (p.is_infinity()) return "infinity";
  return json::array({p.value().real(), p.value().imag()});
}

json to_json(const GridGeometry& g) {
  return {{"center", json::array({g.center.real(), g.center.imag()})},
          {"half_width", g.half_width},
          {"resolution", g.resolution}};
}

json emit_outputs(const std::vector<Artifact>& artifacts, const std::string& directory, const json& scenario_echo,
                  const std::string& command) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec || !fs::is_directory(directory))
    fail(ErrorCode::io, "cannot create output directory '" + directory + "'" + (ec ? ": " + ec.message() : ""));
  auto write = [&](const std::string& name, const std::string& bytes) {
    const fs::path path = fs::path(directory) / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::io, "cannot write '" + path.string() + "' in directory '" + directory + "'");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) fail(ErrorCode::io, "write failed for '" + path.string() + "'");
  };
  json files = json::array();
  for (const auto& a : artifacts) {
    write(a.name, a.bytes);
    files.push_back({{"name", a.name}, {"bytes", a.bytes.size()}, {"sha256", sha256_hex(a.bytes)}});
  }
  json manifest = {{"tool", "coopdyn"},
                   {"version", COOPDYN_VERSION_STRING},
                   {"command", command},
                   {"scenario", scenario_echo},
                   {"files", files}};
  write("manifest.json", dump_json(manifest));
  return manifest;
}

}  // namespace coopdyn::io
