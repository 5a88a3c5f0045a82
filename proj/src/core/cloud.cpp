#include "coopdyn/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "coopdyn/error.hpp"

namespace coopdyn {

const char* to_string(CloudTag tag) noexcept {
  switch (tag) {
    case CloudTag::julia: return "julia";
    case CloudTag::lambda: return "lambda";
    case CloudTag::postcritical: return "postcritical";
    case CloudTag::minimal_set: return "minimal_set";
  }
  return "unknown";
}

const char* to_string(MinimalSetClass c) noexcept {
  switch (c) {
    case MinimalSetClass::attracting: return "attracting";
    case MinimalSetClass::j_touching: return "j_touching";
    case MinimalSetClass::sub_rotative: return "sub_rotative";
    case MinimalSetClass::unresolved: return "unresolved";
  }
  return "unknown";
}

void PointCloud::validate() const {
  require(!points.empty(), "PointCloud: cloud is empty");
  if (weights.empty()) return;
  require(weights.size() == points.size(), "PointCloud: weight count differs from point count");
  double s = 0.0;
  for (double w : weights) {
    require(w >= 0.0, "PointCloud: negative weight");
    s += w;
  }
  require(std::abs(s - 1.0) <= 1e-12, "PointCloud: weights do not sum to 1");
}

std::array<double, 3> embed(const SpherePoint& p) noexcept {
  if (p.is_infinity()) return {0.0, 0.0, 1.0};
  const Complex z = p.value();
  const double r2 = std::norm(z);
  if (r2 > 1e300) return {0.0, 0.0, 1.0};
  const double s = 1.0 / (1.0 + r2);
  return {2.0 * z.real() * s, 2.0 * z.imag() * s, (r2 - 1.0) * s};
}

namespace {

double dist2(const std::array<double, 3>& a, const std::array<double, 3>& b) noexcept {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

constexpr std::uint32_t kLeafSize = 8;

}  // namespace

CloudIndex::CloudIndex(const std::vector<SpherePoint>& points) {
  pts_.reserve(points.size());
  for (const auto& p : points) pts_.push_back(embed(p));
  order_.resize(pts_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!pts_.empty()) {
    nodes_.reserve(2 * pts_.size() / kLeafSize + 2);
    build(0, static_cast<std::uint32_t>(pts_.size()));
  }
}

std::int32_t CloudIndex::build(std::uint32_t begin, std::uint32_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = node.hi = pts_[order_[begin]];
  for (std::uint32_t k = begin; k < end; ++k) {
    const auto& p = pts_[order_[k]];
    for (int a = 0; a < 3; ++a) {
      node.lo[a] = std::min(node.lo[a], p[a]);
      node.hi[a] = std::max(node.hi[a], p[a]);
    }
  }
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return id;

  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (node.hi[a] - node.lo[a] > node.hi[axis] - node.lo[axis]) axis = a;
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t x, std::uint32_t y) { return pts_[x][axis] < pts_[y][axis]; });
  const std::int32_t l = build(begin, mid);
  const std::int32_t r = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = l;
  nodes_[static_cast<std::size_t>(id)].right = r;
  return id;
}

double CloudIndex::box_distance2(const Node& n, const std::array<double, 3>& q) noexcept {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double d = std::max({n.lo[a] - q[a], 0.0, q[a] - n.hi[a]});
    s += d * d;
  }
  return s;
}

void CloudIndex::nearest_rec(std::int32_t id, const std::array<double, 3>& q, double& best2,
                             std::size_t& best) const {
  const Node& n = nodes_[static_cast<std::size_t>(id)];
  if (box_distance2(n, q) >= best2) return;
  if (n.left < 0) {
    for (std::uint32_t k = n.begin; k < n.end; ++k) {
      const double d = dist2(pts_[order_[k]], q);
      if (d < best2) {
        best2 = d;
        best = order_[k];
      }
    }
    return;
  }
  const Node& l = nodes_[static_cast<std::size_t>(n.left)];
  const Node& r = nodes_[static_cast<std::size_t>(n.right)];
  if (box_distance2(l, q) <= box_distance2(r, q)) {
    nearest_rec(n.left, q, best2, best);
    nearest_rec(n.right, q, best2, best);
  } else {
    nearest_rec(n.right, q, best2, best);
    nearest_rec(n.left, q, best2, best);
  }
}

double CloudIndex::nearest_distance(const SpherePoint& p, std::size_t* index) const {
  if (pts_.empty()) return std::numeric_limits<double>::infinity();
  double best2 = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  nearest_rec(0, embed(p), best2, best);
  if (index) *index = best;
  return std::sqrt(best2);
}

bool CloudIndex::within(const SpherePoint& p, double r) const {
  if (pts_.empty()) return false;
  const auto q = embed(p);
  const double r2 = r * r;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (box_distance2(n, q) > r2) continue;
    if (n.left < 0) {
      for (std::uint32_t k = n.begin; k < n.end; ++k)
        if (dist2(pts_[order_[k]], q) <= r2) return true;
      continue;
    }
    stack.push_back(n.left);
    stack.push_back(n.right);
  }
  return false;
}

std::vector<std::size_t> CloudIndex::radius_query(const SpherePoint& p, double r) const {
  std::vector<std::size_t> out;
  if (pts_.empty()) return out;
  const auto q = embed(p);
  const double r2 = r * r;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (box_distance2(n, q) > r2) continue;
    if (n.left < 0) {
      for (std::uint32_t k = n.begin; k < n.end; ++k)
        if (dist2(pts_[order_[k]], q) <= r2) out.push_back(order_[k]);
      continue;
    }
    stack.push_back(n.left);
    stack.push_back(n.right);
  }
  std::sort(out.begin(), out.end());
  return out;
}

MinimalSetEstimate MinimalSetEstimate::infinity() {
  MinimalSetEstimate m;
  m.at_infinity = true;
  m.cloud.points = {SpherePoint::infinity()};
  m.cloud.tag = CloudTag::minimal_set;
  m.classification = MinimalSetClass::attracting;
  m.period = 1;
  m.cycle_components = {m.cloud};
  return m;
}

SpherePoint MinimalSetEstimate::representative() const {
  if (at_infinity || cloud.empty()) return SpherePoint::infinity();
  return cloud.points.front();
}

CaptureSet::CaptureSet(const MinimalSetEstimate& set, double tolerance, double escape_radius)
    : infinity_(set.at_infinity), tol_(tolerance), radius_(escape_radius) {
  if (infinity_) return;
  index_ = CloudIndex(set.cloud.points);
  // Bounding ball in the embedding, used to reject far points cheaply.
  for (const auto& p : set.cloud.points) {
    const auto e = embed(p);
    for (int a = 0; a < 3; ++a) centre_[static_cast<std::size_t>(a)] += e[static_cast<std::size_t>(a)];
  }
  for (double& c : centre_) c /= static_cast<double>(std::max<std::size_t>(1, set.cloud.size()));
  for (const auto& p : set.cloud.points) spread_ = std::max(spread_, std::sqrt(dist2(embed(p), centre_)));
}

bool CaptureSet::contains(const SpherePoint& z) const {
  if (infinity_) {
    if (z.is_infinity()) return true;
    if (radius_ > 0.0) return std::abs(z.value()) >= radius_;
    return chordal_distance(z, SpherePoint::infinity()) <= tol_;
  }
  const double d = std::sqrt(dist2(embed(z), centre_));
  if (d > spread_ + tol_) return false;
  if (index_.size() == 1) return d <= tol_;
  return index_.within(z, tol_);
}

double CaptureSet::distance(const SpherePoint& z) const {
  if (infinity_) return chordal_distance(z, SpherePoint::infinity());
  return index_.nearest_distance(z);
}

}  // namespace coopdyn
