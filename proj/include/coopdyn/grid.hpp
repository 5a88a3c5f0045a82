#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coopdyn/cloud.hpp"
#include "coopdyn/geometry.hpp"

namespace coopdyn {

/// Square node grid: node (i, j) sits at
///   center + (-hw + i*step) + i*(-hw + j*step),  step = 2 hw / (n - 1),
/// and is stored at index j*n + i.
struct GridGeometry {
  Complex center{0.0, 0.0};
  double half_width = 4.0;
  int resolution = 1024;

  void validate() const;
  double step() const noexcept { return 2.0 * half_width / (resolution - 1); }
  std::size_t cells() const noexcept { return static_cast<std::size_t>(resolution) * resolution; }
  std::size_t index(int i, int j) const noexcept { return static_cast<std::size_t>(j) * resolution + i; }
  Complex node(int i, int j) const noexcept;
  Complex node(std::size_t index) const noexcept;
  bool contains(Complex z) const noexcept;
  /// Fractional grid coordinates (x along i, y along j).
  void to_grid(Complex z, double& x, double& y) const noexcept;
  /// Two cell diagonals: the default capture tolerance.
  double capture_tolerance() const noexcept;

  friend bool operator==(const GridGeometry& a, const GridGeometry& b) noexcept {
    return a.center == b.center && a.half_width == b.half_width && a.resolution == b.resolution;
  }
};

/// Real function sampled on the grid nodes plus one value at infinity.
struct GridFunction {
  GridGeometry geometry;
  std::vector<double> values;
  double value_at_infinity = 0.0;
  bool has_infinity = false;
  std::string name;
  int iterations = 0;

  GridFunction() = default;
  GridFunction(const GridGeometry& g, double fill = 0.0, bool with_infinity = false);

  /// Bilinear read at z, clamped to the corner range. Outside the grid the
  /// nearest edge is used; at infinity, value_at_infinity.
  double sample(const SpherePoint& z) const;
  double sup_norm() const noexcept;
  double min_value() const noexcept;
  double max_value() const noexcept;
};

double sup_distance(const GridFunction& a, const GridFunction& b);

constexpr std::int32_t kUndecided = -1;

/// Per-node label: index of a capturing minimal set, or kUndecided.
struct BasinLabelGrid {
  GridGeometry geometry;
  std::vector<std::int32_t> labels;
  std::vector<MinimalSetEstimate> sets;
  int infinity_label = -1;  // index of the infinity set, -1 if absent
  int depth = 0;
  int n_words = 0;
  double capture_tolerance = 0.0;

  std::size_t undecided_count() const noexcept;
  double undecided_fraction() const noexcept;
  std::int32_t label_at(Complex z) const noexcept;
};

}  // namespace coopdyn
