#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "coopdyn/cloud.hpp"
#include "coopdyn/grid.hpp"

namespace coopdyn::io {

using json = nlohmann::ordered_json;

struct Artifact {
  std::string name;
  std::string bytes;
};

std::string sha256_hex(const std::string& bytes);

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

/// Binary PGM; maxval 255 writes one byte per pixel, larger values two
/// bytes big-endian. Row 0 is the top of the image.
std::string encode_pgm(int width, int height, const std::vector<std::uint16_t>& pixels, int maxval);

/// 16-bit raster of a grid function (top row = largest imaginary part) and
/// its sidecar describing value = offset + scale * gray.
std::vector<Artifact> grid_function_pgm(const GridFunction& f, const std::string& stem);

/// 8-bit label raster: undecided 0, set k gray 255 * (k + 1) / count.
std::vector<Artifact> labels_pgm(const BasinLabelGrid& basins, const std::string& stem);

/// 8-bit 0/255 mask raster.
Artifact mask_pgm(const std::vector<std::uint8_t>& mask, const GridGeometry& geometry, const std::string& name);

/// Rows "re,im,weight"; infinity is the literal row "inf,inf,weight".
std::string cloud_csv(const PointCloud& cloud);

std::string dump_json(const json& j);

json to_json(const SpherePoint& p);
json to_json(const GridGeometry& g);

/// Writes every artifact into `directory` plus manifest.json (names, byte
/// counts, SHA-256, scenario echo, tool version). Returns the manifest.
json emit_outputs(const std::vector<Artifact>& artifacts, const std::string& directory, const json& scenario_echo,
                  const std::string& command);

}  // namespace coopdyn::io
