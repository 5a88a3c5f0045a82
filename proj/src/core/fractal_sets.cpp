#include "coopdyn/fractal_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coopdyn/error.hpp"
#include "coopdyn/parallel.hpp"

namespace coopdyn {

double multiplier_modulus(const RationalMap& h, const SpherePoint& p) { return h.spherical_derivative(p); }

std::optional<SpherePoint> find_repelling_fixed_point(const GeneratorSystem& system) {
  for (const auto& h : system.generators) {
    std::optional<SpherePoint> best;
    double best_m = 1.0 + 1e-9;
    for (const Root& r : fixed_points(h)) {
      if (r.point.is_infinity() || !r.converged) continue;
      const double m = multiplier_modulus(h, r.point);
      if (m > best_m) {
        best_m = m;
        best = r.point;
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

PointCloud backward_chaos_game(const DiscreteMeasure& measure, std::size_t n_points, std::size_t burn_in,
                               std::uint64_t seed, CloudTag tag, std::optional<SpherePoint> start) {
  require(n_points > 0, "chaos game: n_points must be positive");
  if (!start) start = find_repelling_fixed_point(measure.system);
  if (!start)
    fail(ErrorCode::invalid_argument,
         "chaos game: no repelling fixed point among the generators; supply a seed point on the Julia set");
  RngStream rng(seed);
  PointCloud cloud;
  cloud.tag = tag;
  cloud.points.reserve(n_points);
  SpherePoint z = *start;
  for (std::size_t step = 0; step < burn_in + n_points; ++step) {
    const RationalMap& h = measure.system[rng.categorical(measure.weights)];
    const auto roots = preimages(h, z);
    z = roots[rng.below(roots.size())].point;
    if (step >= burn_in) cloud.points.push_back(z);
  }
  return cloud;
}

PointCloud julia_backward_cloud(const DiscreteMeasure& measure, std::size_t n_points, std::size_t burn_in,
                                std::uint64_t seed, std::optional<SpherePoint> start) {
  return backward_chaos_game(measure, n_points, burn_in, seed, CloudTag::julia, start);
}

double cloud_resolution(const PointCloud& cloud, std::size_t max_probes) {
  cloud.validate();
  if (cloud.size() < 2) return 0.0;
  const CloudIndex index(cloud.points);
  const std::size_t stride = std::max<std::size_t>(1, cloud.size() / max_probes);
  std::vector<double> nn;
  for (std::size_t k = 0; k < cloud.size(); k += stride) {
    // Second nearest: the first is the point itself.
    double best = std::numeric_limits<double>::infinity();
    const auto hits = index.radius_query(cloud.points[k], 1e-2);
    for (std::size_t h : hits)
      if (h != k) best = std::min(best, chordal_distance(cloud.points[h], cloud.points[k]));
    if (!std::isfinite(best)) {
      // Sparse neighbourhood: fall back to a scan.
      for (std::size_t h = 0; h < cloud.size(); ++h)
        if (h != k) best = std::min(best, chordal_distance(cloud.points[h], cloud.points[k]));
    }
    nn.push_back(best);
  }
  std::nth_element(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(nn.size() / 2), nn.end());
  return nn[nn.size() / 2];
}

std::int32_t classify_point(const DiscreteMeasure& measure, const std::vector<CaptureSet>& captures,
                            const SpherePoint& z, int depth, int n_words, RngStream rng) {
  std::int32_t label = kUndecided;
  for (int w = 0; w < n_words; ++w) {
    // One stream per word, so a deeper run extends the same orbits.
    RngStream word_rng = rng.split(static_cast<std::uint64_t>(w));
    SpherePoint x = z;
    int hit = -1;
    for (int step = 0; step <= depth; ++step) {
      hit = captured_by(captures, x);
      if (hit >= 0 || step == depth) break;
      x = measure.system[word_rng.categorical(measure.weights)](x);
    }
    if (hit < 0) return kUndecided;
    if (w == 0) label = hit;
    else if (hit != label) return kUndecided;
  }
  return label;
}

BasinLabelGrid classify_plane_grid(const DiscreteMeasure& measure, const std::vector<MinimalSetEstimate>& sets,
                                   const GridGeometry& geometry, int depth, int n_words, std::uint64_t seed,
                                   double capture_tolerance) {
  geometry.validate();
  require(!sets.empty() || measure.system.all_polynomial, "classify_plane_grid: no minimal sets supplied");
  require(depth >= 0 && n_words >= 1, "classify_plane_grid: depth >= 0 and n_words >= 1 required");
  BasinLabelGrid out;
  out.geometry = geometry;
  out.sets = sets;
  if (out.sets.empty()) out.sets.push_back(MinimalSetEstimate::infinity());
  for (std::size_t k = 0; k < out.sets.size(); ++k)
    if (out.sets[k].at_infinity) out.infinity_label = static_cast<int>(k);
  out.depth = depth;
  out.n_words = n_words;
  out.capture_tolerance = capture_tolerance > 0.0 ? capture_tolerance : geometry.capture_tolerance();
  const auto captures = make_capture_sets(measure.system, out.sets, out.capture_tolerance);
  out.labels.assign(geometry.cells(), kUndecided);
  const RngStream root(seed);
  parallel_for(geometry.cells(), [&](std::size_t c) {
    out.labels[c] = classify_point(measure, captures, SpherePoint(geometry.node(c)), depth, n_words, root.split(c));
  });
  return out;
}

bool in_fatou_surrogate(const DiscreteMeasure& measure, const BasinLabelGrid& basins, const SpherePoint& z) {
  if (z.is_infinity()) return basins.infinity_label >= 0;
  if (measure.system.escape_radius && std::abs(z.value()) >= *measure.system.escape_radius) return true;
  const GridGeometry& g = basins.geometry;
  if (!g.contains(z.value())) return false;
  double x, y;
  g.to_grid(z.value(), x, y);
  const int i0 = static_cast<int>(std::lround(x));
  const int j0 = static_cast<int>(std::lround(y));
  std::int32_t label = kUndecided;
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      const int i = i0 + di, j = j0 + dj;
      if (i < 0 || j < 0 || i >= g.resolution || j >= g.resolution) return false;
      const std::int32_t l = basins.labels[g.index(i, j)];
      if (l == kUndecided) return false;
      if (di == -1 && dj == -1) label = l;
      else if (l != label) return false;
    }
  return true;
}

KernelProbeReport kernel_julia_probe(const DiscreteMeasure& measure, const PointCloud& julia_cloud,
                                     const BasinLabelGrid& basins, int word_depth, std::size_t n_probes,
                                     std::size_t branch_cap, std::uint64_t seed) {
  require(!julia_cloud.empty(), "kernel probe: empty Julia cloud");
  require(word_depth >= 1 && n_probes >= 1 && branch_cap >= 1, "kernel probe: depth, probes and cap must be positive");
  const std::size_t n = std::min(n_probes, julia_cloud.size());
  const std::size_t stride = julia_cloud.size() / n;
  std::vector<int> needed(n, -1);
  const RngStream root(seed);
  parallel_for(n, [&](std::size_t p) {
    RngStream rng = root.split(p);
    std::vector<SpherePoint> frontier{julia_cloud.points[p * stride]};
    for (int d = 1; d <= word_depth; ++d) {
      std::vector<SpherePoint> next;
      next.reserve(frontier.size() * measure.size());
      for (const auto& z : frontier)
        for (const auto& h : measure.system.generators) next.push_back(h(z));
      for (const auto& z : next)
        if (in_fatou_surrogate(measure, basins, z)) {
          needed[p] = d;
          return;
        }
      if (next.size() > branch_cap) {
        // Partial Fisher-Yates keeps a uniform subset of size branch_cap.
        for (std::size_t k = 0; k < branch_cap; ++k) std::swap(next[k], next[k + rng.below(next.size() - k)]);
        next.resize(branch_cap);
      }
      frontier = std::move(next);
    }
  });
  KernelProbeReport r;
  r.probed = n;
  r.word_depth = word_depth;
  for (int d : needed)
    if (d > 0) {
      ++r.escorted;
      r.max_depth_needed = std::max(r.max_depth_needed, d);
    }
  r.fraction = static_cast<double>(r.escorted) / static_cast<double>(n);
  r.consistent_with_empty_kernel = r.escorted == n;
  return r;
}

HyperbolicityReport hyperbolicity_probe(const DiscreteMeasure& measure, const PointCloud& julia_cloud,
                                        int orbit_depth, int n_words, std::uint64_t seed) {
  julia_cloud.validate();
  std::vector<SpherePoint> values;
  for (const auto& h : measure.system.generators) {
    for (const Root& c : critical_points(h)) values.push_back(h(c.point));
    if (h.is_polynomial()) values.push_back(SpherePoint::infinity());
  }
  std::vector<SpherePoint> samples = values;
  RngStream rng(seed);
  for (int w = 0; w < n_words; ++w)
    for (const auto& v : values) {
      SpherePoint z = v;
      for (int k = 0; k < orbit_depth; ++k) {
        z = measure.system[rng.categorical(measure.weights)](z);
        samples.push_back(z);
      }
    }
  const CloudIndex index(julia_cloud.points);
  HyperbolicityReport r;
  r.postcritical_samples = samples.size();
  r.min_distance = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) r.min_distance = std::min(r.min_distance, index.nearest_distance(s));
  r.resolution = cloud_resolution(julia_cloud);
  r.hyperbolic_consistent = r.min_distance > 2.0 * r.resolution;
  return r;
}

}  // namespace coopdyn
