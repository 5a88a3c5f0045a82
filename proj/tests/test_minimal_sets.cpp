#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "coopdyn/fractal_sets.hpp"
#include "coopdyn/minimal_sets.hpp"
#include "coopdyn/scenario.hpp"
#include "support.hpp"

using namespace coopdyn;

namespace {

const MinimalSetEstimate* finite_set_near(const std::vector<MinimalSetEstimate>& sets, Complex z, double tol) {
  for (const auto& s : sets) {
    if (s.at_infinity) continue;
    for (const auto& p : s.cloud.points)
      if (chordal_distance(p, SpherePoint(z)) <= tol) return &s;
  }
  return nullptr;
}

std::size_t infinite_sets(const std::vector<MinimalSetEstimate>& sets) {
  return static_cast<std::size_t>(std::count_if(sets.begin(), sets.end(), [](const auto& s) { return s.at_infinity; }));
}

MeanStabilityOptions quick_options() {
  MeanStabilityOptions o;
  o.julia_points = 5000;
  o.coverage_depth = 8;
  return o;
}

}  // namespace

TEST_CASE("dc1 has the attracting point 0 and infinity") {
  const DiscreteMeasure m = testing::dc1();
  const auto g = testing::grid(4.5, 256);
  const auto sets = find_attracting_minimal_sets(m, g, {}, 1);
  REQUIRE(sets.size() == 2);
  CHECK(infinite_sets(sets) == 1);
  const auto* zero = finite_set_near(sets, 0.0, 1e-6);
  REQUIRE(zero != nullptr);
  CHECK(zero->period == 1);
  CHECK(closure_holds(m.system, *zero, g.capture_tolerance()));
  CHECK(sets.back().at_infinity);
}

TEST_CASE("z^2 - 1 has the period-two cycle") {
  const DiscreteMeasure m = testing::single({-1, 0, 1});
  const auto g = testing::grid(2.0, 256);
  const auto sets = find_attracting_minimal_sets(m, g, {}, 1);
  REQUIRE(sets.size() == 2);
  const auto* cyc = finite_set_near(sets, 0.0, 1e-6);
  REQUIRE(cyc != nullptr);
  CHECK(finite_set_near(sets, -1.0, 1e-6) == cyc);
  CHECK(cyc->period == 2);
  CHECK(cyc->cycle_components.size() == 2);
}

TEST_CASE("z^2 sets and mean stability") {
  const DiscreteMeasure m = testing::single({0, 0, 1});
  const auto g = testing::grid(2.0, 128);
  const auto sets = find_attracting_minimal_sets(m, g, {}, 1);
  REQUIRE(sets.size() == 2);
  CHECK(finite_set_near(sets, 0.0, 1e-6) != nullptr);

  const auto all = discover_minimal_sets(m, g, {}, 1);
  CHECK(finite_set_near(all, 1.0, 1e-6) != nullptr);

  const auto r = test_mean_stability(m, g, quick_options(), 3);
  CHECK(r.verdict == Verdict::no);
  REQUIRE(r.counterexample >= 0);
  const auto& bad = r.sets[static_cast<std::size_t>(r.counterexample)];
  CHECK(bad.classification == MinimalSetClass::j_touching);
  CHECK(finite_set_near({bad}, 1.0, 1e-6) != nullptr);
}

TEST_CASE("dc1 is mean stable") {
  const DiscreteMeasure m = testing::dc1();
  const auto g = testing::grid(4.5, 256);
  const auto r = test_mean_stability(m, g, quick_options(), 3);
  CHECK(r.verdict == Verdict::yes);
  CHECK(r.uncovered_cells == 0);
  REQUIRE(r.witness.U.size() == g.cells());
  REQUIRE(r.witness.V.size() == g.cells());
  // V lies inside U.
  for (std::size_t k = 0; k < g.cells(); ++k)
    if (r.witness.V[k]) CHECK(r.witness.U[k]);
  for (const auto& s : r.sets) CHECK(s.classification == MinimalSetClass::attracting);
}

TEST_CASE("generator order does not change the sets") {
  const auto g = testing::grid(4.5, 256);
  const DiscreteMeasure a = testing::dc1();
  const DiscreteMeasure b = build_semigroup({a.system[1], a.system[0]}, {0.5, 0.5});
  const auto sa = find_attracting_minimal_sets(a, g, {}, 1);
  const auto sb = find_attracting_minimal_sets(b, g, {}, 1);
  REQUIRE(sa.size() == sb.size());
  CHECK(infinite_sets(sa) == infinite_sets(sb));
  for (const auto& s : sa)
    if (!s.at_infinity) CHECK(finite_set_near(sb, s.representative().value(), 1e-6) != nullptr);
}

TEST_CASE("sets are disjoint and closed") {
  const DiscreteMeasure m = testing::single({-1, 0, 1});
  const auto g = testing::grid(2.0, 256);
  const auto sets = discover_minimal_sets(m, g, {}, 1);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!sets[i].at_infinity) CHECK(closure_holds(m.system, sets[i], g.capture_tolerance()));
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (sets[i].at_infinity || sets[j].at_infinity) continue;
      const CloudIndex index(sets[j].cloud.points);
      for (const auto& p : sets[i].cloud.points) CHECK(index.nearest_distance(p) > g.capture_tolerance());
    }
  }
}

TEST_CASE("rotation domain example is not mean stable") {
  const Scenario s = parse_scenario_file(testing::scenario("stfnms.json"));
  REQUIRE(s.measure.has_value());
  MeanStabilityOptions o = quick_options();
  const auto r = test_mean_stability(*s.measure, s.grid, o, *s.seed);
  CHECK(r.verdict == Verdict::no);
  REQUIRE(r.counterexample >= 0);
  CHECK(r.sets[static_cast<std::size_t>(r.counterexample)].classification == MinimalSetClass::sub_rotative);
}

TEST_CASE("one-member family scan") {
  const DiscreteMeasure m = testing::dc1();
  const auto g = testing::grid(4.5, 128);
  BifurcationOptions o;
  o.stability = quick_options();
  const auto rows = scan_family_bifurcation({{0.0, m}}, g, o, 5);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].count == 2);
  CHECK(rows[0].verdict == Verdict::yes);
  CHECK(rows[0].witness_U.size() == g.cells());
}

TEST_CASE("verdict names") {
  CHECK(std::string(to_string(Verdict::yes)) != std::string(to_string(Verdict::no)));
  CHECK(std::string(to_string(MinimalSetClass::attracting)) == "attracting");
}
