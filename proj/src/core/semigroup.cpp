#include "coopdyn/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coopdyn/error.hpp"
#include "coopdyn/parallel.hpp"

namespace coopdyn {

double polynomial_escape_radius(const RationalMap& h) {
  require(h.is_polynomial(), "escape radius: map is not a polynomial");
  const Polynomial& a = h.numerator();
  const int d = h.degree();
  require(d >= 2, "escape radius: polynomial degree must be at least 2");
  const double lead = std::abs(a[static_cast<std::size_t>(d)]);
  double lower = 0.0;
  for (int k = 0; k < d; ++k) lower += std::abs(a[static_cast<std::size_t>(k)]);
  return std::max({1.0, (1.0 + 2.0 * lower) / lead, std::pow(4.0 / lead, 1.0 / (d - 1))});
}

GeneratorSystem make_generator_system(std::vector<RationalMap> generators) {
  require(!generators.empty(), "generator system: empty generator list");
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      require(!(generators[i] == generators[j]), "generator system: duplicate generators " + std::to_string(i) +
                                                     " and " + std::to_string(j));
  GeneratorSystem s;
  s.all_polynomial = std::all_of(generators.begin(), generators.end(), [](const RationalMap& h) {
    return h.is_polynomial() && h.degree() >= 2;
  });
  if (s.all_polynomial) {
    double r = 0.0;
    for (const auto& h : generators) r = std::max(r, polynomial_escape_radius(h));
    s.escape_radius = r;
  }
  s.generators = std::move(generators);
  return s;
}

namespace {

void check_weights(const std::vector<double>& weights, std::size_t m) {
  require(weights.size() == m, "measure: " + std::to_string(weights.size()) + " weights for " + std::to_string(m) +
                                   " generators");
  double s = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w > 0.0, "measure: weights must be positive");
    s += w;
  }
  require(std::abs(s - 1.0) <= 1e-12, "measure: weights must sum to 1 (got " + std::to_string(s) + ")");
}

}  // namespace

DiscreteMeasure build_semigroup(std::vector<RationalMap> maps, std::vector<double> weights) {
  require(!maps.empty(), "measure: empty generator list");
  check_weights(weights, maps.size());
  DiscreteMeasure m;
  m.system = make_generator_system(std::move(maps));
  m.weights = std::move(weights);
  return m;
}

DiscreteMeasure reweighted(const DiscreteMeasure& measure, std::vector<double> weights) {
  check_weights(weights, measure.size());
  DiscreteMeasure m = measure;
  m.weights = std::move(weights);
  return m;
}

RandomWord sample_word(const DiscreteMeasure& measure, std::size_t length, RngStream& rng) {
  RandomWord w(length);
  for (auto& letter : w) letter = static_cast<std::uint32_t>(rng.categorical(measure.weights));
  return w;
}

std::vector<SpherePoint> forward_orbit(const GeneratorSystem& system, const RandomWord& word, SpherePoint z) {
  std::vector<SpherePoint> orbit;
  orbit.reserve(word.size() + 1);
  orbit.push_back(z);
  for (std::uint32_t letter : word) {
    require(letter < system.size(), "forward_orbit: letter out of range");
    z = system[letter](z);
    orbit.push_back(z);
  }
  return orbit;
}

std::vector<CaptureSet> make_capture_sets(const GeneratorSystem& system, const std::vector<MinimalSetEstimate>& sets,
                                          double tolerance) {
  std::vector<CaptureSet> out;
  out.reserve(sets.size());
  const double r = system.escape_radius.value_or(0.0);
  for (const auto& s : sets) out.emplace_back(s, tolerance, r);
  return out;
}

int captured_by(const std::vector<CaptureSet>& sets, const SpherePoint& z) {
  for (std::size_t k = 0; k < sets.size(); ++k)
    if (sets[k].contains(z)) return static_cast<int>(k);
  return -1;
}

double default_capture_distance(const std::vector<MinimalSetEstimate>& sets) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      CloudIndex idx(sets[j].cloud.points);
      for (const auto& p : sets[i].cloud.points) gap = std::min(gap, idx.nearest_distance(p));
    }
  return std::min(0.5 * gap, 0.05);
}

MonteCarloEstimate estimate_T_monte_carlo(const DiscreteMeasure& measure, const std::vector<MinimalSetEstimate>& sets,
                                          std::size_t target, const SpherePoint& z, const MonteCarloOptions& options,
                                          std::uint64_t seed) {
  require(options.n_samples > 0, "estimate_T: n_samples must be positive");
  require(target < sets.size(), "estimate_T: target index out of range");
  if (sets[target].at_infinity)
    require(measure.system.all_polynomial, "estimate_T: target infinity requires a polynomial system");
  const double capture = options.capture_dist > 0.0 ? options.capture_dist : default_capture_distance(sets);
  require(capture > 0.0, "estimate_T: capture distance must be positive");

  const auto regions = make_capture_sets(measure.system, sets, capture);
  std::vector<int> outcome(options.n_samples, -1);
  const RngStream root(seed);
  parallel_for(options.n_samples, [&](std::size_t s) {
    RngStream rng = root.split(s);
    SpherePoint x = z;
    for (std::size_t step = 0; step <= options.n_steps; ++step) {
      const int k = captured_by(regions, x);
      if (k >= 0) {
        outcome[s] = k;
        return;
      }
      if (step == options.n_steps) break;
      x = measure.system[rng.categorical(measure.weights)](x);
    }
  });

  MonteCarloEstimate e;
  e.samples = options.n_samples;
  e.capture_dist = capture;
  for (int o : outcome) {
    if (o == static_cast<int>(target)) ++e.hits;
    if (o < 0) ++e.undecided;
  }
  const double n = static_cast<double>(e.samples);
  e.estimate = static_cast<double>(e.hits) / n;
  e.stderr_ = std::sqrt(e.estimate * (1.0 - e.estimate) / n);
  return e;
}

}  // namespace coopdyn
