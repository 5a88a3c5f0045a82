#pragma once

#include <string>

#include "coopdyn/grid.hpp"
#include "coopdyn/semigroup.hpp"

namespace testing {

using coopdyn::Complex;

inline coopdyn::RationalMap polynomial(std::initializer_list<Complex> c) { return coopdyn::RationalMap(c); }

// h1 = (z^2 - 1) o (z^2 - 1), h2 = (z^2/4) o (z^2/4).
inline coopdyn::DiscreteMeasure dc1(double a = 0.5) {
  return coopdyn::build_semigroup({polynomial({0, 0, -2, 0, 1}), polynomial({0, 0, 0, 0, 1.0 / 64})}, {a, 1.0 - a});
}

inline coopdyn::DiscreteMeasure single(std::initializer_list<Complex> c) {
  return coopdyn::build_semigroup({polynomial(c)}, {1.0});
}

inline coopdyn::GridGeometry grid(double hw, int n) {
  coopdyn::GridGeometry g;
  g.half_width = hw;
  g.resolution = n;
  return g;
}

inline std::string scenario(const std::string& name) { return std::string(COOPDYN_SCENARIO_DIR) + "/" + name; }

}  // namespace testing
