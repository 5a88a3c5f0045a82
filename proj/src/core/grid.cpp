#include "coopdyn/grid.hpp"

#include <algorithm>
#include <cmath>

#include "coopdyn/error.hpp"

namespace coopdyn {

void GridGeometry::validate() const {
  require(resolution >= 2, "grid: resolution must be at least 2");
  require(std::isfinite(half_width) && half_width > 0.0, "grid: half_width must be positive");
  require(std::isfinite(center.real()) && std::isfinite(center.imag()), "grid: center must be finite");
}

Complex GridGeometry::node(int i, int j) const noexcept {
  const double s = step();
  return center + Complex(-half_width + i * s, -half_width + j * s);
}

Complex GridGeometry::node(std::size_t index) const noexcept {
  const auto n = static_cast<std::size_t>(resolution);
  return node(static_cast<int>(index % n), static_cast<int>(index / n));
}

void GridGeometry::to_grid(Complex z, double& x, double& y) const noexcept {
  const double s = step();
  x = (z.real() - center.real() + half_width) / s;
  y = (z.imag() - center.imag() + half_width) / s;
}

bool GridGeometry::contains(Complex z) const noexcept {
  const Complex d = z - center;
  return std::abs(d.real()) <= half_width && std::abs(d.imag()) <= half_width;
}

double GridGeometry::capture_tolerance() const noexcept { return 2.0 * std::sqrt(2.0) * step(); }

GridFunction::GridFunction(const GridGeometry& g, double fill, bool with_infinity)
    : geometry(g), values(g.cells(), fill), value_at_infinity(fill), has_infinity(with_infinity) {}

double GridFunction::sample(const SpherePoint& z) const {
  if (z.is_infinity()) return value_at_infinity;
  double x, y;
  geometry.to_grid(z.value(), x, y);
  const double top = geometry.resolution - 1;
  x = std::clamp(x, 0.0, top);
  y = std::clamp(y, 0.0, top);
  const int i = std::min(static_cast<int>(x), geometry.resolution - 2);
  const int j = std::min(static_cast<int>(y), geometry.resolution - 2);
  const double tx = x - i, ty = y - j;
  const std::size_t b = geometry.index(i, j);
  const auto n = static_cast<std::size_t>(geometry.resolution);
  const double v00 = values[b], v10 = values[b + 1], v01 = values[b + n], v11 = values[b + n + 1];
  const double v = (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
  return std::clamp(v, std::min({v00, v10, v01, v11}), std::max({v00, v10, v01, v11}));
}

double GridFunction::sup_norm() const noexcept {
  double s = has_infinity ? std::abs(value_at_infinity) : 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

double GridFunction::min_value() const noexcept {
  double s = values.empty() ? 0.0 : values[0];
  for (double v : values) s = std::min(s, v);
  return has_infinity ? std::min(s, value_at_infinity) : s;
}

double GridFunction::max_value() const noexcept {
  double s = values.empty() ? 0.0 : values[0];
  for (double v : values) s = std::max(s, v);
  return has_infinity ? std::max(s, value_at_infinity) : s;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (!(a.geometry == b.geometry)) fail(ErrorCode::invalid_argument, "grid functions: geometry mismatch");
  double s = (a.has_infinity && b.has_infinity) ? std::abs(a.value_at_infinity - b.value_at_infinity) : 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) s = std::max(s, std::abs(a.values[k] - b.values[k]));
  return s;
}

std::size_t BasinLabelGrid::undecided_count() const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kUndecided));
}

double BasinLabelGrid::undecided_fraction() const noexcept {
  return labels.empty() ? 0.0 : static_cast<double>(undecided_count()) / static_cast<double>(labels.size());
}

std::int32_t BasinLabelGrid::label_at(Complex z) const noexcept {
  if (!geometry.contains(z)) return kUndecided;
  double x, y;
  geometry.to_grid(z, x, y);
  const int i = std::clamp(static_cast<int>(std::lround(x)), 0, geometry.resolution - 1);
  const int j = std::clamp(static_cast<int>(std::lround(y)), 0, geometry.resolution - 1);
  return labels[geometry.index(i, j)];
}

}  // namespace coopdyn
