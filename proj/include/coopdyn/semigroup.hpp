#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coopdyn/cloud.hpp"
#include "coopdyn/geometry.hpp"
#include "coopdyn/rng.hpp"

namespace coopdyn {

/// R_h = max(1, (1 + 2 sum_{k<d}|a_k|)/|a_d|, (4/|a_d|)^{1/(d-1)}).
/// Beyond R_h, |h(z)| >= 2|z|. Requires a polynomial of degree >= 2.
double polynomial_escape_radius(const RationalMap& h);

struct GeneratorSystem {
  std::vector<RationalMap> generators;
  bool all_polynomial = false;
  std::optional<double> escape_radius;  // present iff all_polynomial

  std::size_t size() const noexcept { return generators.size(); }
  const RationalMap& operator[](std::size_t j) const { return generators[j]; }
};

GeneratorSystem make_generator_system(std::vector<RationalMap> generators);

struct DiscreteMeasure {
  GeneratorSystem system;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
};

/// Validates maps and weights. Errors: empty list, nonpositive weight,
/// |sum - 1| > 1e-12, duplicate generators, count mismatch.
DiscreteMeasure build_semigroup(std::vector<RationalMap> maps, std::vector<double> weights);

/// Same generators, different weights.
DiscreteMeasure reweighted(const DiscreteMeasure& measure, std::vector<double> weights);

/// Letters in application order: the orbit is gamma_n o ... o gamma_1.
using RandomWord = std::vector<std::uint32_t>;

RandomWord sample_word(const DiscreteMeasure& measure, std::size_t length, RngStream& rng);

/// [z, g1(z), g2 g1(z), ...], length |word| + 1.
std::vector<SpherePoint> forward_orbit(const GeneratorSystem& system, const RandomWord& word, SpherePoint z);

/// Index of the set whose capture region contains z, or -1.
int captured_by(const std::vector<CaptureSet>& sets, const SpherePoint& z);

std::vector<CaptureSet> make_capture_sets(const GeneratorSystem& system, const std::vector<MinimalSetEstimate>& sets,
                                          double tolerance);

struct MonteCarloOptions {
  std::size_t n_samples = 10000;
  std::size_t n_steps = 200;
  double capture_dist = 0.0;  // <= 0: default_capture_distance(sets)
};

struct MonteCarloEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t hits = 0;
  std::size_t samples = 0;
  std::size_t undecided = 0;
  double capture_dist = 0.0;
};

/// Fraction of sampled orbits from z whose first capture is by sets[target]
/// within n_steps. Orbits captured by nothing are counted in `undecided`.
MonteCarloEstimate estimate_T_monte_carlo(const DiscreteMeasure& measure, const std::vector<MinimalSetEstimate>& sets,
                                          std::size_t target, const SpherePoint& z, const MonteCarloOptions& options,
                                          std::uint64_t seed);

/// Half the minimum pairwise chordal gap between the given sets, at most 0.05.
double default_capture_distance(const std::vector<MinimalSetEstimate>& sets);

}  // namespace coopdyn
