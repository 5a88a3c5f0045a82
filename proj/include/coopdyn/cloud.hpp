#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "coopdyn/geometry.hpp"

namespace coopdyn {

enum class CloudTag { julia, lambda, postcritical, minimal_set };

const char* to_string(CloudTag tag) noexcept;

/// Weighted sample of sphere points.
struct PointCloud {
  std::vector<SpherePoint> points;
  std::vector<double> weights;  // empty means uniform
  CloudTag tag = CloudTag::julia;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  /// Throws on an empty cloud or on unnormalized weights.
  void validate() const;
};

/// Unit-sphere embedding under stereographic projection. Euclidean distance
/// between images equals the diameter-2 chordal distance.
std::array<double, 3> embed(const SpherePoint& p) noexcept;

/// Nearest-neighbour index over a point set in the chordal metric (a k-d tree
/// on the sphere embedding).
class CloudIndex {
 public:
  CloudIndex() = default;
  explicit CloudIndex(const std::vector<SpherePoint>& points);

  bool empty() const noexcept { return pts_.empty(); }
  std::size_t size() const noexcept { return pts_.size(); }

  /// Chordal distance to the nearest indexed point; +inf when empty.
  double nearest_distance(const SpherePoint& q, std::size_t* index = nullptr) const;
  /// True iff some indexed point is within chordal distance r of q.
  bool within(const SpherePoint& q, double r) const;
  /// Indices of all points within chordal distance r of q.
  std::vector<std::size_t> radius_query(const SpherePoint& q, double r) const;

 private:
  struct Node {
    std::array<double, 3> lo, hi;  // bounding box
    std::uint32_t begin = 0, end = 0;
    std::int32_t left = -1, right = -1;
  };
  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  static double box_distance2(const Node& n, const std::array<double, 3>& q) noexcept;
  void nearest_rec(std::int32_t node, const std::array<double, 3>& q, double& best2, std::size_t& best) const;

  std::vector<std::array<double, 3>> pts_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

enum class MinimalSetClass { attracting, j_touching, sub_rotative, unresolved };

const char* to_string(MinimalSetClass c) noexcept;

/// Point-cloud approximation of a minimal set, or the symbolic set {inf}.
struct MinimalSetEstimate {
  bool at_infinity = false;
  PointCloud cloud;
  MinimalSetClass classification = MinimalSetClass::unresolved;
  int period = 1;
  std::vector<PointCloud> cycle_components;
  /// Modulus of the multiplier of the seed cycle that produced the set.
  double seed_multiplier = 0.0;
  std::string diagnostic;

  static MinimalSetEstimate infinity();
  /// First cloud point, or infinity.
  SpherePoint representative() const;
};

/// Fast membership test for a minimal set's capture ball.
class CaptureSet {
 public:
  CaptureSet(const MinimalSetEstimate& set, double tolerance, double escape_radius);
  /// escape_radius <= 0 disables the |z| >= R shortcut for the infinity set.
  bool contains(const SpherePoint& z) const;
  double distance(const SpherePoint& z) const;
  bool at_infinity() const noexcept { return infinity_; }

 private:
  bool infinity_;
  double tol_;
  double radius_;
  CloudIndex index_;
  std::array<double, 3> centre_{};
  double spread_ = 0.0;  // max embedding distance from centre_ to a point
};

}  // namespace coopdyn
