#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coopdyn/cloud.hpp"
#include "coopdyn/grid.hpp"
#include "coopdyn/semigroup.hpp"

namespace coopdyn {

/// |m(h, p)| at a fixed point p, in the chart that contains p.
double multiplier_modulus(const RationalMap& h, const SpherePoint& p);

/// A finite repelling fixed point of some generator, if any.
std::optional<SpherePoint> find_repelling_fixed_point(const GeneratorSystem& system);

/// Backward chaos game: generator j with probability p_j, then a preimage
/// branch chosen uniformly among the deg(h_j) roots. The first burn_in
/// iterates are dropped. Starts at `start` or at a repelling fixed point.
PointCloud backward_chaos_game(const DiscreteMeasure& measure, std::size_t n_points, std::size_t burn_in,
                               std::uint64_t seed, CloudTag tag, std::optional<SpherePoint> start = std::nullopt);

PointCloud julia_backward_cloud(const DiscreteMeasure& measure, std::size_t n_points, std::size_t burn_in,
                                std::uint64_t seed, std::optional<SpherePoint> start = std::nullopt);

/// Median nearest-neighbour distance over (a sample of) the cloud.
double cloud_resolution(const PointCloud& cloud, std::size_t max_probes = 2000);

/// Label of z: the set capturing all n_words sampled orbits within depth
/// steps, or kUndecided.
std::int32_t classify_point(const DiscreteMeasure& measure, const std::vector<CaptureSet>& captures,
                            const SpherePoint& z, int depth, int n_words, RngStream rng);

/// capture_tolerance <= 0 selects the geometry default (two cell diagonals).
BasinLabelGrid classify_plane_grid(const DiscreteMeasure& measure, const std::vector<MinimalSetEstimate>& sets,
                                   const GridGeometry& geometry, int depth, int n_words, std::uint64_t seed,
                                   double capture_tolerance = 0.0);

/// Fatou surrogate: escaped past the escape radius, or the landing node and
/// its eight neighbours carry one common basin label.
bool in_fatou_surrogate(const DiscreteMeasure& measure, const BasinLabelGrid& basins, const SpherePoint& z);

struct KernelProbeReport {
  std::size_t probed = 0;
  std::size_t escorted = 0;
  double fraction = 0.0;
  int max_depth_needed = 0;
  int word_depth = 0;
  bool consistent_with_empty_kernel = false;
};

/// For sampled cloud points, searches words up to word_depth (breadth-first,
/// at most branch_cap images kept per level) for one landing in the Fatou
/// surrogate.
KernelProbeReport kernel_julia_probe(const DiscreteMeasure& measure, const PointCloud& julia_cloud,
                                     const BasinLabelGrid& basins, int word_depth, std::size_t n_probes,
                                     std::size_t branch_cap, std::uint64_t seed);

struct HyperbolicityReport {
  double min_distance = 0.0;
  double resolution = 0.0;
  std::size_t postcritical_samples = 0;
  bool hyperbolic_consistent = false;
};

/// Pushes every generator's critical values forward along n_words random
/// words and measures the distance of the samples to the Julia cloud.
HyperbolicityReport hyperbolicity_probe(const DiscreteMeasure& measure, const PointCloud& julia_cloud,
                                        int orbit_depth, int n_words, std::uint64_t seed);

}  // namespace coopdyn
