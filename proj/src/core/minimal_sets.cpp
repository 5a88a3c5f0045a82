#include "coopdyn/minimal_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "coopdyn/error.hpp"
#include "coopdyn/fractal_sets.hpp"
#include "coopdyn/parallel.hpp"

namespace coopdyn {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::yes: return "true";
    case Verdict::no: return "false";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const noexcept {
    return static_cast<std::size_t>(mix64(static_cast<std::uint64_t>(k.first) * 0x9E3779B97F4A7C15ULL ^
                                          static_cast<std::uint64_t>(k.second)));
  }
};

using KeySet = std::unordered_set<std::pair<std::int64_t, std::int64_t>, KeyHash>;

std::pair<std::int64_t, std::int64_t> quantize(const SpherePoint& z, double q) {
  if (z.is_infinity()) return {std::numeric_limits<std::int64_t>::max(), 0};
  return {std::llround(z.value().real() / q), std::llround(z.value().imag() / q)};
}

double tolerance_for(const GridGeometry& g, double requested) {
  return requested > 0.0 ? requested : g.capture_tolerance();
}

struct Candidate {
  SpherePoint point;
  double multiplier = 0.0;
};

enum class ClosureStatus { ok, escaped, merged, capped };

struct Closure {
  ClosureStatus status = ClosureStatus::ok;
  std::vector<SpherePoint> points;
};

// Forward closure of z0 under all generators, deduplicated on a q-lattice.
Closure forward_closure(const GeneratorSystem& system, const SpherePoint& z0, double q,
                        const std::vector<CaptureSet>& accepted, const MinimalSetOptions& opt) {
  Closure c;
  KeySet seen;
  c.points.push_back(z0);
  seen.insert(quantize(z0, q));
  std::vector<SpherePoint> frontier{z0};
  for (int round = 0; round < opt.max_closure_rounds && !frontier.empty(); ++round) {
    std::vector<SpherePoint> next;
    for (const auto& z : frontier)
      for (const auto& h : system.generators) {
        const SpherePoint w = h(z);
        if (system.escape_radius && (w.is_infinity() || std::abs(w.value()) >= *system.escape_radius)) {
          c.status = ClosureStatus::escaped;
          return c;
        }
        if (captured_by(accepted, w) >= 0) {
          c.status = ClosureStatus::merged;
          return c;
        }
        if (seen.insert(quantize(w, q)).second) {
          c.points.push_back(w);
          next.push_back(w);
          if (c.points.size() >= opt.max_points) {
            c.status = ClosureStatus::capped;
            return c;
          }
        }
      }
    frontier = std::move(next);
  }
  if (!frontier.empty()) c.status = ClosureStatus::capped;
  return c;
}

// Shrinks a closure onto the minimal set it contains: the closure of a
// point added last lies deeper in the attractor than the seed.
Closure minimal_closure(const GeneratorSystem& system, const SpherePoint& z0, double q,
                        const std::vector<CaptureSet>& accepted, const MinimalSetOptions& opt) {
  Closure c = forward_closure(system, z0, q, accepted, opt);
  for (int pass = 0; pass < 8 && c.status == ClosureStatus::ok && c.points.size() > 1; ++pass) {
    Closure inner = forward_closure(system, c.points.back(), q, accepted, opt);
    if (inner.status != ClosureStatus::ok) return inner;
    const bool shrank = static_cast<double>(inner.points.size()) < 0.9 * static_cast<double>(c.points.size());
    c = std::move(inner);
    if (!shrank) break;
  }
  return c;
}

// Cycle of a word under forward iteration, if the orbit settles.
std::optional<Candidate> word_cycle(const GeneratorSystem& system, const RandomWord& word, SpherePoint z) {
  constexpr int kIterations = 600;
  constexpr int kMaxCycle = 8;
  std::vector<SpherePoint> history;
  auto apply = [&](SpherePoint x) {
    for (std::uint32_t l : word) x = system[l](x);
    return x;
  };
  for (int it = 0; it < kIterations; ++it) {
    z = apply(z);
    if (system.escape_radius && (z.is_infinity() || std::abs(z.value()) >= *system.escape_radius))
      return std::nullopt;
    history.push_back(z);
    const std::size_t n = history.size();
    for (int p = 1; p <= kMaxCycle && static_cast<std::size_t>(p) < n; ++p) {
      if (chordal_distance(history[n - 1], history[n - 1 - static_cast<std::size_t>(p)]) > 1e-12) continue;
      // Multiplier of the word cycle: product of spherical derivatives.
      double m = 1.0;
      SpherePoint x = z;
      for (int r = 0; r < p; ++r)
        for (std::uint32_t l : word) {
          m *= system[l].spherical_derivative(x);
          x = system[l](x);
        }
      return Candidate{z, m};
    }
  }
  return std::nullopt;
}

std::vector<RandomWord> words_of_length(std::size_t m, int length, int cap, RngStream& rng) {
  std::vector<RandomWord> out;
  double total = std::pow(static_cast<double>(m), length);
  if (total <= cap) {
    const auto n = static_cast<std::size_t>(total);
    for (std::size_t code = 0; code < n; ++code) {
      RandomWord w(static_cast<std::size_t>(length));
      std::size_t c = code;
      for (auto& l : w) {
        l = static_cast<std::uint32_t>(c % m);
        c /= m;
      }
      out.push_back(std::move(w));
    }
    return out;
  }
  for (std::size_t j = 0; j < m; ++j) out.emplace_back(static_cast<std::size_t>(length), static_cast<std::uint32_t>(j));
  while (out.size() < static_cast<std::size_t>(cap)) {
    RandomWord w(static_cast<std::size_t>(length));
    for (auto& l : w) l = static_cast<std::uint32_t>(rng.below(m));
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Candidate> attracting_candidates(const DiscreteMeasure& measure, const GridGeometry& geometry,
                                             const MinimalSetOptions& opt, RngStream& rng) {
  const GeneratorSystem& sys = measure.system;
  std::vector<SpherePoint> starts;
  for (const auto& h : sys.generators)
    for (const Root& c : critical_points(h)) starts.push_back(h(c.point));
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i)
      starts.emplace_back(geometry.center +
                          Complex(geometry.half_width * (i - 2) / 2.5, geometry.half_width * (j - 2) / 2.5));

  std::vector<Candidate> out;
  for (const auto& h : sys.generators)
    for (const Root& r : fixed_points(h)) {
      if (!r.converged || (r.point.is_infinity() && sys.all_polynomial)) continue;
      const double m = multiplier_modulus(h, r.point);
      if (m < 1.0 - 1e-9) out.push_back({r.point, m});
    }
  for (int len = 1; len <= opt.search_depth; ++len)
    for (const auto& w : words_of_length(sys.size(), len, opt.words_per_length, rng))
      for (const auto& s : starts)
        if (auto c = word_cycle(sys, w, s); c && c->multiplier < 1.0) out.push_back(*c);
  return out;
}

std::vector<Candidate> other_candidates(const GeneratorSystem& sys) {
  std::vector<Candidate> out;
  for (const auto& h : sys.generators)
    for (const Root& r : fixed_points(h)) {
      if (!r.converged || (r.point.is_infinity() && sys.all_polynomial)) continue;
      const double m = multiplier_modulus(h, r.point);
      if (m >= 1.0 - 1e-9) out.push_back({r.point, m});
    }
  return out;
}

std::vector<MinimalSetEstimate> assemble(const DiscreteMeasure& measure, const std::vector<Candidate>& candidates,
                                         double tol, const MinimalSetOptions& opt) {
  const GeneratorSystem& sys = measure.system;
  std::vector<MinimalSetEstimate> sets;
  std::vector<CaptureSet> accepted;
  const double q = tol / 4.0;
  for (const Candidate& cand : candidates) {
    if (captured_by(accepted, cand.point) >= 0) continue;
    Closure c = minimal_closure(sys, cand.point, q, accepted, opt);
    if (c.status == ClosureStatus::escaped || c.status == ClosureStatus::merged) continue;
    MinimalSetEstimate s;
    s.cloud.points = std::move(c.points);
    s.cloud.tag = CloudTag::minimal_set;
    s.seed_multiplier = cand.multiplier;
    if (c.status == ClosureStatus::capped) s.diagnostic = "closure did not stabilize within the point/round cap";
    const PeriodStructure ps = period_structure(sys, s, 64, tol);
    s.period = ps.period;
    s.cycle_components = ps.components;
    if (!ps.resolved) s.diagnostic += (s.diagnostic.empty() ? "" : "; ") + ps.diagnostic;
    accepted.emplace_back(s, tol, sys.escape_radius.value_or(0.0));
    sets.push_back(std::move(s));
  }
  if (sys.all_polynomial) sets.push_back(MinimalSetEstimate::infinity());
  return sets;
}

}  // namespace

std::vector<MinimalSetEstimate> find_attracting_minimal_sets(const DiscreteMeasure& measure,
                                                             const GridGeometry& geometry,
                                                             const MinimalSetOptions& options, std::uint64_t seed) {
  RngStream rng(seed);
  const double tol = tolerance_for(geometry, options.capture_tolerance);
  return assemble(measure, attracting_candidates(measure, geometry, options, rng), tol, options);
}

std::vector<MinimalSetEstimate> discover_minimal_sets(const DiscreteMeasure& measure, const GridGeometry& geometry,
                                                      const MinimalSetOptions& options, std::uint64_t seed) {
  RngStream rng(seed);
  const double tol = tolerance_for(geometry, options.capture_tolerance);
  auto cands = attracting_candidates(measure, geometry, options, rng);
  for (const auto& c : other_candidates(measure.system)) cands.push_back(c);
  return assemble(measure, cands, tol, options);
}

bool closure_holds(const GeneratorSystem& system, const MinimalSetEstimate& set, double tolerance) {
  if (set.at_infinity) return system.all_polynomial;
  const CloudIndex index(set.cloud.points);
  for (const auto& z : set.cloud.points)
    for (const auto& h : system.generators)
      if (index.nearest_distance(h(z)) > tolerance) return false;
  return true;
}

// ---------------------------------------------------------------- periods

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

}  // namespace

PeriodStructure period_structure(const GeneratorSystem& system, const MinimalSetEstimate& set, int r_max,
                                 double tolerance) {
  PeriodStructure out;
  if (set.at_infinity || set.cloud.size() <= 1) {
    out.resolved = true;
    out.period = 1;
    out.components = {set.cloud};
    return out;
  }
  const auto& pts = set.cloud.points;
  const std::size_t n = pts.size();
  const CloudIndex index(pts);
  UnionFind uf(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j : index.radius_query(pts[k], tolerance)) uf.unite(k, j);

  // Image cluster of each (point, generator).
  std::vector<std::size_t> target(n * system.size());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t g = 0; g < system.size(); ++g) {
      std::size_t idx = 0;
      index.nearest_distance(system[g](pts[k]), &idx);
      target[k * system.size() + g] = idx;
    }
  // Coarsen until every class maps into a single class.
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::size_t> first(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t g = 0; g < system.size(); ++g) {
        const std::size_t src = uf.find(k);
        const std::size_t dst = uf.find(target[k * system.size() + g]);
        if (first[src] == n) first[src] = dst;
        else if (uf.unite(first[src], dst)) {
          changed = true;
          first[src] = uf.find(dst);
        }
      }
  }
  std::vector<std::size_t> roots;
  for (std::size_t k = 0; k < n; ++k)
    if (uf.find(k) == k) roots.push_back(k);
  const auto count = static_cast<int>(roots.size());
  if (count > r_max) {
    out.diagnostic = "component count " + std::to_string(count) + " exceeds r_max " + std::to_string(r_max);
    out.components = {set.cloud};
    return out;
  }
  std::vector<std::size_t> image(n, n);
  for (std::size_t k = 0; k < n; ++k) image[uf.find(k)] = uf.find(target[k * system.size()]);

  // The induced class map must be a single cycle through every class.
  std::vector<std::size_t> cycle;
  std::size_t c = uf.find(0);
  for (int s = 0; s <= count; ++s) {
    if (!cycle.empty() && c == cycle.front()) break;
    cycle.push_back(c);
    c = image[c];
  }
  if (static_cast<int>(cycle.size()) != count || c != cycle.front()) {
    out.diagnostic = "induced component map is not a single cycle";
    out.components = {set.cloud};
    return out;
  }
  out.resolved = true;
  out.period = count;
  out.components.assign(cycle.size(), PointCloud{{}, {}, CloudTag::minimal_set});
  for (std::size_t pos = 0; pos < cycle.size(); ++pos)
    for (std::size_t k = 0; k < n; ++k)
      if (uf.find(k) == cycle[pos]) out.components[pos].points.push_back(pts[k]);
  return out;
}

// ---------------------------------------------------------------- classification

namespace {

struct ClassifyResult {
  MinimalSetClass cls = MinimalSetClass::unresolved;
  int witness_n = 0;
};

int two_ring_witness(const DiscreteMeasure& measure, const MinimalSetEstimate& set, double eps,
                     const ClassifyOptions& opt, RngStream& rng) {
  const GeneratorSystem& sys = measure.system;
  const CloudIndex index(set.cloud.points);
  std::vector<SpherePoint> tests;
  const std::size_t stride = std::max<std::size_t>(1, set.cloud.size() / 64);
  for (std::size_t k = 0; k < set.cloud.size(); k += stride) {
    const SpherePoint p = set.cloud.points[k];
    tests.push_back(p);
    if (p.is_infinity()) continue;
    const double r = 0.999 * eps * (1.0 + std::norm(p.value())) / 2.0;  // plane radius of the chordal ring
    for (int a = 0; a < 8; ++a) {
      const SpherePoint t(p.value() + std::polar(r, 2.0 * M_PI * a / 8.0 + 0.1));
      if (index.nearest_distance(t) <= eps) tests.push_back(t);
    }
  }
  for (int n = 1; n <= opt.max_n; ++n) {
    bool all = true;
    for (const auto& w : words_of_length(sys.size(), n, static_cast<int>(opt.words_per_n), rng)) {
      for (const auto& t : tests) {
        SpherePoint z = t;
        for (std::uint32_t l : w) z = sys[l](z);
        if (index.nearest_distance(z) > eps / 2.0) {
          all = false;
          break;
        }
      }
      if (!all) break;
    }
    if (all) return n;
  }
  return 0;
}

bool rotation_detected(const GeneratorSystem& sys, const MinimalSetEstimate& set, double tol,
                       const ClassifyOptions& opt) {
  const std::size_t stride = std::max<std::size_t>(1, set.cloud.size() / 16);
  for (std::size_t k = 0; k < set.cloud.size(); k += stride) {
    const SpherePoint p = set.cloud.points[k];
    if (p.is_infinity()) continue;
    for (const auto& h : sys.generators) {
      if (chordal_distance(h(p), p) > 1e-3 * tol) continue;
      if (std::abs(multiplier_modulus(h, p) - 1.0) > 1e-3) continue;
      const double delta = tol;
      SpherePoint z(p.value() + delta);
      std::array<bool, 16> bins{};
      bool stayed = true;
      for (int it = 0; it < opt.rotation_iterations; ++it) {
        z = h(z);
        if (z.is_infinity()) {
          stayed = false;
          break;
        }
        const Complex d = z.value() - p.value();
        const double r = std::abs(d);
        if (r < delta / 4.0 || r > 4.0 * delta) {
          stayed = false;
          break;
        }
        const double a = std::atan2(d.imag(), d.real()) + M_PI;
        bins[static_cast<std::size_t>(std::min(15.0, std::floor(a / (2.0 * M_PI) * 16.0)))] = true;
      }
      if (stayed && std::all_of(bins.begin(), bins.end(), [](bool b) { return b; })) return true;
    }
  }
  return false;
}

ClassifyResult classify_impl(const DiscreteMeasure& measure, const MinimalSetEstimate& set,
                             const PointCloud* julia_cloud, const GridGeometry& geometry,
                             const ClassifyOptions& opt, std::uint64_t seed) {
  const double tol = tolerance_for(geometry, opt.capture_tolerance);
  if (set.at_infinity) {
    if (measure.system.all_polynomial) return {MinimalSetClass::attracting, 1};
    return {MinimalSetClass::unresolved, 0};
  }
  if (julia_cloud && !julia_cloud->empty()) {
    const CloudIndex jidx(julia_cloud->points);
    for (const auto& p : set.cloud.points)
      if (jidx.nearest_distance(p) <= tol) return {MinimalSetClass::j_touching, 0};
  }
  RngStream rng(seed);
  if (const int n = two_ring_witness(measure, set, opt.ring_scale * tol, opt, rng); n > 0)
    return {MinimalSetClass::attracting, n};
  if (rotation_detected(measure.system, set, tol, opt)) return {MinimalSetClass::sub_rotative, 0};
  return {MinimalSetClass::unresolved, 0};
}

}  // namespace

MinimalSetClass classify_minimal_set(const DiscreteMeasure& measure, const MinimalSetEstimate& set,
                                     const PointCloud& julia_cloud, const GridGeometry& geometry,
                                     const ClassifyOptions& options, std::uint64_t seed) {
  return classify_impl(measure, set, &julia_cloud, geometry, options, seed).cls;
}

// ---------------------------------------------------------------- mean stability

MeanStabilityResult test_mean_stability(const DiscreteMeasure& measure, const GridGeometry& geometry,
                                        const MeanStabilityOptions& options, std::uint64_t seed) {
  geometry.validate();
  MeanStabilityResult out;
  const RngStream root(seed);
  out.sets = discover_minimal_sets(measure, geometry, options.discovery, root.split(0).next_u64());

  PointCloud julia;
  try {
    julia = julia_backward_cloud(measure, options.julia_points, 100, root.split(1).next_u64());
  } catch (const Error&) {
    out.diagnostic = "no repelling fixed point: J-touching test skipped";
  }

  int witness_n = 0;
  bool unresolved = false;
  for (std::size_t k = 0; k < out.sets.size(); ++k) {
    const auto r = classify_impl(measure, out.sets[k], julia.empty() ? nullptr : &julia, geometry, options.classify,
                                 root.split(100 + k).next_u64());
    out.sets[k].classification = r.cls;
    if (r.cls == MinimalSetClass::j_touching || r.cls == MinimalSetClass::sub_rotative) {
      if (out.counterexample < 0) out.counterexample = static_cast<int>(k);
    } else if (r.cls == MinimalSetClass::unresolved) {
      unresolved = true;
    } else {
      witness_n = std::max(witness_n, r.witness_n);
    }
  }
  if (out.counterexample >= 0) {
    out.verdict = Verdict::no;
    return out;
  }
  if (unresolved) {
    out.verdict = Verdict::inconclusive;
    out.diagnostic = "a minimal set could not be classified";
    return out;
  }

  // Steering condition: every node reaches U along some word.
  const double tol = tolerance_for(geometry, options.classify.capture_tolerance);
  const double eps = options.classify.ring_scale * tol;
  const auto U_sets = make_capture_sets(measure.system, out.sets, eps);
  const auto V_sets = make_capture_sets(measure.system, out.sets, eps / 2.0);
  out.witness.U.assign(geometry.cells(), 0);
  out.witness.V.assign(geometry.cells(), 0);
  for (std::size_t c = 0; c < geometry.cells(); ++c) {
    const SpherePoint z(geometry.node(c));
    out.witness.U[c] = captured_by(U_sets, z) >= 0;
    out.witness.V[c] = captured_by(V_sets, z) >= 0;
  }
  out.witness.n = witness_n;

  GridGeometry cover = geometry;
  if (options.coverage_resolution >= 2) cover.resolution = options.coverage_resolution;
  std::vector<int> needed(cover.cells(), -1);
  parallel_for(cover.cells(), [&](std::size_t c) {
    RngStream rng = root.split(1000000 + c);
    std::vector<SpherePoint> frontier{SpherePoint(cover.node(c))};
    for (int d = 0; d <= options.coverage_depth; ++d) {
      for (const auto& z : frontier)
        if (captured_by(U_sets, z) >= 0) {
          needed[c] = d;
          return;
        }
      if (d == options.coverage_depth) return;
      std::vector<SpherePoint> next;
      next.reserve(frontier.size() * measure.size());
      for (const auto& z : frontier)
        for (const auto& h : measure.system.generators) next.push_back(h(z));
      const std::size_t cap = std::size_t{1} << (2 * std::min(d + 1, 15));  // 4^(d+1)
      if (next.size() > cap) {
        for (std::size_t k = 0; k < cap; ++k) std::swap(next[k], next[k + rng.below(next.size() - k)]);
        next.resize(cap);
      }
      frontier = std::move(next);
    }
  });
  for (int d : needed) {
    if (d < 0) ++out.uncovered_cells;
    else out.witness.coverage_depth = std::max(out.witness.coverage_depth, d);
  }
  if (out.uncovered_cells > 0) {
    out.verdict = Verdict::inconclusive;
    out.diagnostic = std::to_string(out.uncovered_cells) + " nodes not steered into U within the coverage depth";
  } else {
    out.verdict = Verdict::yes;
  }
  return out;
}

std::vector<BifurcationRow> scan_family_bifurcation(const std::vector<FamilyMember>& family,
                                                    const GridGeometry& geometry, const BifurcationOptions& options,
                                                    std::uint64_t seed) {
  std::vector<BifurcationRow> rows;
  for (const auto& member : family) {
    BifurcationRow row;
    row.t = member.t;
    const MeanStabilityResult ms = test_mean_stability(member.measure, geometry, options.stability, seed);
    row.count = ms.sets.size();
    row.verdict = ms.verdict;
    if (ms.verdict == Verdict::yes) row.witness_U = ms.witness.U;
    const BasinLabelGrid basins = classify_plane_grid(member.measure, ms.sets, geometry, options.classify_depth,
                                                      options.classify_words, seed);
    row.undecided_fraction = basins.undecided_fraction();
    rows.push_back(row);
  }
  if (options.nested)
    for (std::size_t k = 1; k < rows.size(); ++k)
      if (rows[k].count > rows[k - 1].count) rows[k].monotonicity_warning = true;
  return rows;
}

}  // namespace coopdyn
