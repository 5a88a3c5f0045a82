#pragma once

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "coopdyn/rng.hpp"

namespace testing {

// Markov operator axioms on randomized inputs. Ops supplies:
//   F constant(double), F random(RngStream&, double lo, double hi),
//   F apply(const F&), F combine(double a, const F&, double b, const F&),
//   double min(const F&), double max(const F&), double sup_diff(const F&, const F&).
template <class Ops>
void check_markov_axioms(const Ops& ops, std::uint64_t seed, int trials = 100) {
  coopdyn::RngStream rng(seed);

  const auto one = ops.apply(ops.constant(1.0));
  CHECK(ops.sup_diff(one, ops.constant(1.0)) <= 1e-15);

  for (int t = 0; t < trials; ++t) {
    const auto f = ops.random(rng, 0.0, 1.0);
    const auto Mf = ops.apply(f);
    CHECK(ops.min(Mf) >= 0.0);

    const auto g = ops.random(rng, -3.0, 3.0);
    const double sup_g = std::max(std::abs(ops.min(g)), std::abs(ops.max(g)));
    const auto Mg = ops.apply(g);
    CHECK(std::max(std::abs(ops.min(Mg)), std::abs(ops.max(Mg))) <= sup_g * (1 + 1e-15));
    CHECK(ops.min(Mg) >= ops.min(g) - 1e-15);
    CHECK(ops.max(Mg) <= ops.max(g) + 1e-15);

    const double a = 4 * rng.uniform() - 2, b = 4 * rng.uniform() - 2;
    const auto lhs = ops.apply(ops.combine(a, f, b, g));
    const auto rhs = ops.combine(a, Mf, b, Mg);
    CHECK(ops.sup_diff(lhs, rhs) <= 1e-12);
  }
}

}  // namespace testing
