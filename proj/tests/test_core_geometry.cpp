#include <doctest.h>

#include <cmath>

#include "coopdyn/error.hpp"
#include "coopdyn/geometry.hpp"
#include "coopdyn/rng.hpp"
#include "support.hpp"

using namespace coopdyn;
using testing::polynomial;

namespace {

SpherePoint random_point(RngStream& rng, double scale = 3.0) {
  return SpherePoint(Complex(scale * (2 * rng.uniform() - 1), scale * (2 * rng.uniform() - 1)));
}

RationalMap random_poly(RngStream& rng, int degree) {
  Polynomial c;
  for (int k = 0; k <= degree; ++k) c.emplace_back(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
  c.back() += Complex(1.0, 0.0);
  return RationalMap(c);
}

}  // namespace

TEST_CASE("sphere points") {
  CHECK(SpherePoint::infinity().is_infinity());
  CHECK(SpherePoint::from_complex(Complex(INFINITY, 0)).is_infinity());
  CHECK(SpherePoint::from_complex(Complex(NAN, 1)).is_infinity());
  CHECK(SpherePoint(Complex(1, 2)).modulus() == doctest::Approx(std::sqrt(5.0)));
  CHECK(std::isinf(SpherePoint::infinity().modulus()));
}

TEST_CASE("chordal distance examples") {
  CHECK(chordal_distance(SpherePoint(0.0), SpherePoint::infinity()) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(chordal_distance(SpherePoint(Complex(0.3, 0.7)), SpherePoint(Complex(0.3, 0.7))) == 0.0);
  CHECK(chordal_distance(SpherePoint(1.0), SpherePoint(-1.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(chordal_distance(SpherePoint::infinity(), SpherePoint::infinity()) == 0.0);
  // Far points are handled in the reciprocal chart.
  CHECK(chordal_distance(SpherePoint(1e200), SpherePoint::infinity()) < 1e-150);
}

TEST_CASE("chordal metric axioms on random triples") {
  RngStream rng(11);
  for (int t = 0; t < 2000; ++t) {
    const SpherePoint a = random_point(rng, 10), b = random_point(rng, 0.5), c = random_point(rng, 100);
    const double ab = chordal_distance(a, b), ba = chordal_distance(b, a);
    CHECK(ab == ba);
    CHECK(ab <= 2.0);
    CHECK(chordal_distance(a, c) <= ab + chordal_distance(b, c) + 1e-12);
  }
}

TEST_CASE("evaluation") {
  const RationalMap h1 = polynomial({0, 0, -2, 0, 1});
  CHECK(h1(SpherePoint(0.0)) == SpherePoint(0.0));
  const RationalMap q = polynomial({0, 0, 0.25});
  CHECK(std::abs(q(SpherePoint(2.0)).value() - Complex(1.0)) < 1e-15);
  CHECK(h1(SpherePoint::infinity()).is_infinity());
  // Pole of a rational map.
  const RationalMap r({Complex(1)}, {Complex(-1), Complex(1)});
  CHECK(r(SpherePoint(1.0)).is_infinity());
  CHECK(r(SpherePoint::infinity()) == SpherePoint(0.0));
  // Huge arguments never produce NaN.
  const SpherePoint big = h1(SpherePoint(Complex(1e100, 1e100)));
  CHECK(big.is_infinity());
}

TEST_CASE("map validation") {
  CHECK_THROWS_AS(RationalMap({Complex(3.0)}), Error);                                       // constant
  CHECK_THROWS_AS(RationalMap({Complex(-1), Complex(1)}, {Complex(-1), Complex(1)}), Error);  // (z-1)/(z-1)
  CHECK_THROWS_AS(RationalMap({Complex(1), Complex(1e-13)}), Error);                          // degenerate lead
  const RationalMap folded({Complex(0), Complex(0), Complex(2)}, {Complex(4)});
  CHECK(folded.is_polynomial());
  CHECK(std::abs(folded(SpherePoint(2.0)).value() - Complex(2.0)) < 1e-15);
}

TEST_CASE("spherical derivative") {
  const RationalMap z2 = polynomial({0, 0, 1});
  CHECK(z2.spherical_derivative(SpherePoint(1.0)) == doctest::Approx(2.0));
  CHECK(z2.spherical_derivative(SpherePoint(0.0)) == 0.0);
  CHECK(z2.spherical_derivative(SpherePoint::infinity()) == doctest::Approx(0.0));
  const RationalMap id = RationalMap::identity();
  RngStream rng(3);
  for (int t = 0; t < 50; ++t) CHECK(id.spherical_derivative(random_point(rng, 50)) == doctest::Approx(1.0));
  CHECK(id.spherical_derivative(SpherePoint::infinity()) == doctest::Approx(1.0));
}

TEST_CASE("preimages") {
  const RationalMap z2 = polynomial({0, 0, 1});
  auto r = preimages(z2, SpherePoint(1.0));
  REQUIRE(r.size() == 2);
  const double s = r[0].point.value().real() + r[1].point.value().real();
  CHECK(std::abs(s) < 1e-12);
  CHECK(std::abs(std::abs(r[0].point.value().real()) - 1.0) < 1e-12);

  const RationalMap g1 = polynomial({-1, 0, 1});
  r = preimages(g1, SpherePoint(-1.0));
  REQUIRE(r.size() == 2);
  for (const auto& root : r) CHECK(std::abs(root.point.value()) < 1e-7);

  RngStream rng(5);
  for (int t = 0; t < 100; ++t) {
    const RationalMap h = random_poly(rng, 2 + static_cast<int>(rng.below(5)));
    const SpherePoint w = random_point(rng);
    const auto pre = preimages(h, w);
    CHECK(pre.size() == static_cast<std::size_t>(h.degree()));
    for (const auto& p : pre) {
      CHECK(p.converged);
      CHECK(chordal_distance(h(p.point), w) <= 1e-8);
    }
  }
}

TEST_CASE("critical points") {
  auto c = critical_points(polynomial({0, 0, 1}));
  REQUIRE(c.size() == 1);
  CHECK(std::abs(c[0].point.value()) < 1e-12);

  c = critical_points(polynomial({0, 0, -2, 0, 1}));
  REQUIRE(c.size() == 3);
  std::vector<double> re;
  for (const auto& r : c) {
    CHECK(std::abs(r.point.value().imag()) < 1e-10);
    re.push_back(r.point.value().real());
  }
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-1.0));
  CHECK(re[1] == doctest::Approx(0.0));
  CHECK(re[2] == doctest::Approx(1.0));

  RngStream rng(8);
  for (int d = 2; d <= 8; ++d) CHECK(critical_points(random_poly(rng, d)).size() == static_cast<std::size_t>(d - 1));
}

TEST_CASE("fixed points") {
  const auto f = fixed_points(polynomial({0, 0, 1}));
  CHECK(f.size() == 3);
  int inf = 0;
  for (const auto& r : f) inf += r.point.is_infinity();
  CHECK(inf == 1);
}

TEST_CASE("composition") {
  const RationalMap g1 = polynomial({-1, 0, 1});
  const RationalMap h = compose(g1, g1);
  const RationalMap expected = polynomial({0, 0, -2, 0, 1});
  REQUIRE(h.numerator().size() == expected.numerator().size());
  for (std::size_t k = 0; k < h.numerator().size(); ++k)
    CHECK(std::abs(h.numerator()[k] - expected.numerator()[k]) < 1e-14);

  RngStream rng(21);
  const RationalMap f = random_poly(rng, 3);
  const RationalMap fi = compose(f, RationalMap::identity());
  for (std::size_t k = 0; k < f.numerator().size(); ++k) CHECK(std::abs(fi.numerator()[k] - f.numerator()[k]) < 1e-14);

  for (int t = 0; t < 30; ++t) {
    const RationalMap a = random_poly(rng, 2 + static_cast<int>(rng.below(3)));
    const RationalMap b = random_poly(rng, 2 + static_cast<int>(rng.below(3)));
    const RationalMap ab = compose(a, b);
    CHECK(ab.degree() == a.degree() * b.degree());
    const SpherePoint z = random_point(rng, 1.0);
    CHECK(chordal_distance(ab(z), a(b(z))) <= 1e-9);
    const double lhs = ab.spherical_derivative(z);
    const double rhs = a.spherical_derivative(b(z)) * b.spherical_derivative(z);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("composition of rational maps") {
  const RationalMap m({Complex(1), Complex(2)}, {Complex(3), Complex(1)});  // (2z+1)/(z+3)
  const RationalMap sq = polynomial({0, 0, 1});
  const RationalMap c = compose(m, sq);
  CHECK(c.degree() == 2);
  RngStream rng(2);
  for (int t = 0; t < 20; ++t) {
    const SpherePoint z = random_point(rng, 2.0);
    CHECK(chordal_distance(c(z), m(sq(z))) <= 1e-9);
  }
}

TEST_CASE("composition overflow") {
  const RationalMap h = polynomial({0, 0, 1e100});
  CHECK_THROWS_AS(compose(h, compose(h, h)), Error);
}
