#include <doctest.h>

#include <cmath>

#include "coopdyn/error.hpp"
#include "coopdyn/fractal_sets.hpp"
#include "coopdyn/minimal_sets.hpp"
#include "coopdyn/takagi.hpp"
#include "support.hpp"

using namespace coopdyn;
using State = NeumannTruncation::State;

TEST_CASE("neumann truncation: geometric terms") {
  NeumannTruncation rule(0.5, 1e-6, 1000);
  State s = State::running;
  int n = 0;
  while (s == State::running) s = rule.push(std::ldexp(1.0, -n++));
  CHECK(s == State::converged);
  // Stops at the first 2^-n with 2^-n / (1 - 1/2) <= 1e-6, n = 21.
  CHECK(rule.terms() == 22);
  CHECK(rule.tail_bound() <= 1e-6);
}

TEST_CASE("neumann truncation: other outcomes") {
  NeumannTruncation flat(0.5, 1e-6, 1000, 10);
  State s = State::running;
  while (s == State::running) s = flat.push(1.0);
  CHECK(s == State::diverged);
  CHECK(flat.terms() == 11);

  NeumannTruncation fixed(0.5, 0.0, 7);
  s = State::running;
  while (s == State::running) s = fixed.push(0.1);
  CHECK(s == State::exhausted);
  CHECK(fixed.terms() == 7);

  NeumannTruncation zero(0.9, 1e-6, 100);
  CHECK(zero.push(0.0) == State::converged);
  CHECK(zero.push(5.0) == State::converged);  // sticky

  NeumannTruncation slow(1.0, 1e-6, 100);
  slow.push(1e-9);
  CHECK(std::isinf(slow.tail_bound()));
  CHECK_THROWS_AS(NeumannTruncation(0.5, 1e-6, 0), Error);
}

TEST_CASE("green function") {
  const DiscreteMeasure z2 = testing::single({0, 0, 1});
  const RandomWord w(60, 0);
  CHECK(green_function_value(z2.system, w, SpherePoint(2.0), 60) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(green_function_value(z2.system, w, SpherePoint(Complex(0, 3)), 60) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(green_function_value(z2.system, w, SpherePoint(0.5), 60) == 0.0);
  CHECK(green_function_value(z2.system, w, SpherePoint(1e200), 60) ==
        doctest::Approx(200 * std::log(10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(green_function_value(z2.system, RandomWord(3, 0), SpherePoint(2.0), 10), Error);
}

TEST_CASE("exponents for dc1") {
  const DiscreteMeasure m = testing::dc1();
  const OmegaEstimate om = omega_integral_mc(m, 500, 40, 1);
  CHECK(om.estimate == 0.0);
  const AnalysisReport r = analytic_exponents(m, om);
  CHECK(r.entropy_term == doctest::Approx(std::log(2.0)));
  CHECK(r.degree_term == doctest::Approx(std::log(4.0)));
  CHECK(r.u_value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.dimH_lambda == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("omega is positive when a critical point escapes") {
  // z^2 + 3: the critical value 3 escapes, so Omega = G(0) > 0.
  const DiscreteMeasure m = build_semigroup({testing::polynomial({3, 0, 1}), testing::polynomial({0, 0, 1})}, {0.5, 0.5});
  const OmegaEstimate om = omega_integral_mc(m, 2000, 40, 4);
  CHECK(om.estimate > 0.0);
  const AnalysisReport r = analytic_exponents(m, om);
  CHECK(r.u_value < 1.0);
}

TEST_CASE("hoelder estimate recovers a power law") {
  const GridGeometry g = testing::grid(1.0, 1025);
  for (double alpha : {0.3, 0.5, 0.8}) {
    GridFunction f(g);
    for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = std::pow(std::abs(g.node(k).real()), alpha);
    const auto h = holder_exponent_estimate(f, SpherePoint(0.0), 8 * g.step(), 256 * g.step());
    CHECK(h.exponent == doctest::Approx(alpha).epsilon(0.05 / alpha));
    CHECK(h.radii.size() == 6);
  }
  GridFunction f(g);
  CHECK_THROWS_AS(holder_exponent_estimate(f, SpherePoint(0.9), 0.01, 0.5), Error);
  CHECK_THROWS_AS(holder_exponent_estimate(f, SpherePoint(0.0), 0.01, 0.5), Error);  // constant: no usable scales
}

TEST_CASE("takagi series on a small dc1 grid") {
  const DiscreteMeasure m = testing::dc1();
  const auto g = testing::grid(4.5, 128);
  const auto sets = find_attracting_minimal_sets(m, g, {}, 1);
  const auto basins = classify_plane_grid(m, sets, g, 200, 8, 2);
  const TransitionOperator op(m, basins, 3);
  SolveOptions so;
  so.tol = 1e-10;
  const std::size_t inf = static_cast<std::size_t>(basins.infinity_label);
  const auto T = solve_T_fixed_point(op, inf, so);
  const GridFunction zeta = zeta_field(op, T.T, 0);
  CHECK(zeta.value_at_infinity == 0.0);
  CHECK(zeta.sample(SpherePoint(0.0)) == doctest::Approx(0.0).epsilon(1e-9));
  const auto r = takagi_series(op, zeta, 0.5, 1e-8);
  CHECK(r.converged);
  CHECK(r.residual <= 1e-7);
  CHECK(r.psi.sample(SpherePoint(0.0)) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(takagi_residual(op, r.psi, zeta) == doctest::Approx(r.residual));
  CHECK_THROWS_AS(zeta_field(op, T.T, 1), Error);
}

TEST_CASE("lambda samples") {
  const DiscreteMeasure m = testing::dc1();
  const PointCloud c = sample_lambda(m, 1000, 50, 3);
  CHECK(c.size() == 1000);
  CHECK(c.tag == CloudTag::lambda);
}
