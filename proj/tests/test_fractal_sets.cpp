#include <doctest.h>

#include <cmath>

#include "coopdyn/error.hpp"
#include "coopdyn/fractal_sets.hpp"
#include "coopdyn/minimal_sets.hpp"
#include "support.hpp"

using namespace coopdyn;

namespace {

MinimalSetEstimate point_set(Complex z) {
  MinimalSetEstimate s;
  s.cloud.points = {SpherePoint(z)};
  s.cloud.tag = CloudTag::minimal_set;
  s.classification = MinimalSetClass::attracting;
  return s;
}

}  // namespace

TEST_CASE("cloud embedding matches the chordal metric") {
  RngStream rng(1);
  for (int t = 0; t < 200; ++t) {
    const SpherePoint a(Complex(8 * rng.uniform() - 4, 8 * rng.uniform() - 4));
    const SpherePoint b(Complex(rng.uniform(), rng.uniform()));
    const auto ea = embed(a), eb = embed(b);
    const double d = std::hypot(ea[0] - eb[0], ea[1] - eb[1], ea[2] - eb[2]);
    CHECK(d == doctest::Approx(chordal_distance(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("cloud index agrees with brute force") {
  RngStream rng(2);
  std::vector<SpherePoint> pts;
  for (int k = 0; k < 500; ++k) pts.emplace_back(Complex(6 * rng.uniform() - 3, 6 * rng.uniform() - 3));
  pts.push_back(SpherePoint::infinity());
  const CloudIndex index(pts);
  for (int t = 0; t < 200; ++t) {
    const SpherePoint q(Complex(10 * rng.uniform() - 5, 10 * rng.uniform() - 5));
    double best = INFINITY;
    for (const auto& p : pts) best = std::min(best, chordal_distance(p, q));
    CHECK(index.nearest_distance(q) == doctest::Approx(best).epsilon(1e-12));
    std::size_t count = 0;
    for (const auto& p : pts) count += chordal_distance(p, q) <= 0.2;
    CHECK(index.radius_query(q, 0.2).size() == count);
    CHECK(index.within(q, 0.2) == (count > 0));
  }
  CHECK(std::isinf(CloudIndex().nearest_distance(SpherePoint(0.0))));
}

TEST_CASE("point cloud validation") {
  PointCloud empty;
  CHECK_THROWS_AS(empty.validate(), Error);
  PointCloud c;
  c.points = {SpherePoint(0.0), SpherePoint(1.0)};
  c.weights = {0.5, 0.6};
  CHECK_THROWS_AS(c.validate(), Error);
  c.weights = {0.5, 0.5};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("julia cloud of z^2 lies on the unit circle") {
  const DiscreteMeasure m = testing::single({0, 0, 1});
  const PointCloud c = julia_backward_cloud(m, 20000, 100, 3);
  REQUIRE(c.size() == 20000);
  double worst = 0.0;
  for (const auto& p : c.points) worst = std::max(worst, std::abs(p.modulus() - 1.0));
  CHECK(worst <= 0.01);
}

TEST_CASE("julia cloud of dc1 avoids the basin of 0 and the escape region") {
  const DiscreteMeasure m = testing::dc1();
  const PointCloud c = julia_backward_cloud(m, 20000, 100, 3);
  for (const auto& p : c.points) {
    REQUIRE_FALSE(p.is_infinity());
    CHECK(p.modulus() >= 0.4);
    CHECK(p.modulus() <= 64.0);
  }
}

TEST_CASE("julia cloud is backward invariant") {
  const DiscreteMeasure m = testing::dc1();
  const PointCloud c = julia_backward_cloud(m, 20000, 100, 8);
  const CloudIndex index(c.points);
  const double res = cloud_resolution(c);
  CHECK(res > 0.0);
  // Preimages of cloud points under every generator stay near the cloud.
  std::vector<double> d;
  for (std::size_t k = 0; k < 500; ++k)
    for (std::size_t j = 0; j < m.size(); ++j)
      for (const auto& r : preimages(m.system[j], c.points[k])) d.push_back(index.nearest_distance(r.point));
  std::sort(d.begin(), d.end());
  CHECK(d[d.size() / 2] <= 5 * res);
  CHECK(d[static_cast<std::size_t>(0.99 * d.size())] <= 0.05);
}

TEST_CASE("classify_point") {
  const DiscreteMeasure m = testing::dc1();
  const std::vector<MinimalSetEstimate> sets{point_set(0.0), MinimalSetEstimate::infinity()};
  const auto caps = make_capture_sets(m.system, sets, 0.01);
  CHECK(classify_point(m, caps, SpherePoint(10.0), 50, 8, RngStream(1)) == 1);
  CHECK(classify_point(m, caps, SpherePoint(0.0), 50, 8, RngStream(1)) == 0);
  CHECK(classify_point(m, caps, SpherePoint(0.1), 50, 8, RngStream(1)) == 0);

  // Labels follow the order of the sets.
  const std::vector<MinimalSetEstimate> swapped{MinimalSetEstimate::infinity(), point_set(0.0)};
  const auto caps2 = make_capture_sets(m.system, swapped, 0.01);
  CHECK(classify_point(m, caps2, SpherePoint(10.0), 50, 8, RngStream(1)) == 0);
  CHECK(classify_point(m, caps2, SpherePoint(0.0), 50, 8, RngStream(1)) == 1);
}

TEST_CASE("undecided fraction does not grow with depth") {
  const DiscreteMeasure m = testing::dc1();
  const auto g = testing::grid(4.5, 96);
  const auto sets = find_attracting_minimal_sets(m, g, {}, 5);
  double prev = 1.0;
  for (int depth : {5, 10, 20, 40, 80}) {
    const auto b = classify_plane_grid(m, sets, g, depth, 4, 11);
    CHECK(b.undecided_fraction() <= prev);
    prev = b.undecided_fraction();
  }
  CHECK(prev < 0.5);
}

TEST_CASE("kernel probe") {
  const DiscreteMeasure m = testing::dc1();
  const auto g = testing::grid(4.5, 256);
  const auto sets = find_attracting_minimal_sets(m, g, {}, 5);
  const auto basins = classify_plane_grid(m, sets, g, 200, 8, 6);
  const PointCloud cloud = julia_backward_cloud(m, 5000, 100, 7);
  const auto r = kernel_julia_probe(m, cloud, basins, 20, 100, 256, 8);
  CHECK(r.probed == 100);
  CHECK(r.fraction == 1.0);
  CHECK(r.consistent_with_empty_kernel);

  // A single map keeps its Julia set invariant: nothing is escorted.
  const DiscreteMeasure z2 = testing::single({0, 0, 1});
  const auto g2 = testing::grid(2.0, 256);
  const auto sets2 = find_attracting_minimal_sets(z2, g2, {}, 5);
  const auto basins2 = classify_plane_grid(z2, sets2, g2, 200, 8, 6);
  PointCloud one;
  one.points = {SpherePoint(1.0)};
  const auto r2 = kernel_julia_probe(z2, one, basins2, 20, 10, 256, 8);
  CHECK(r2.fraction == 0.0);
  CHECK_FALSE(r2.consistent_with_empty_kernel);

  CHECK_THROWS_AS(kernel_julia_probe(z2, PointCloud{}, basins2, 20, 10, 256, 8), Error);
}

TEST_CASE("fatou surrogate") {
  const DiscreteMeasure m = testing::dc1();
  const auto g = testing::grid(4.5, 128);
  const auto sets = find_attracting_minimal_sets(m, g, {}, 5);
  const auto basins = classify_plane_grid(m, sets, g, 200, 8, 6);
  CHECK(in_fatou_surrogate(m, basins, SpherePoint(100.0)));
  CHECK(in_fatou_surrogate(m, basins, SpherePoint(0.0)));
  CHECK(in_fatou_surrogate(m, basins, SpherePoint::infinity()));
}

TEST_CASE("hyperbolicity probe") {
  const DiscreteMeasure dc1 = testing::dc1();
  const auto r1 = hyperbolicity_probe(dc1, julia_backward_cloud(dc1, 20000, 100, 1), 30, 8, 2);
  CHECK(r1.hyperbolic_consistent);

  const DiscreteMeasure z2 = testing::single({0, 0, 1});
  const auto r2 = hyperbolicity_probe(z2, julia_backward_cloud(z2, 20000, 100, 1), 30, 8, 2);
  CHECK(r2.hyperbolic_consistent);
  CHECK(r2.min_distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-2));

  // z^2 - 2: the critical orbit lands on the Julia set.
  const DiscreteMeasure cheb = testing::single({-2, 0, 1});
  const auto r3 = hyperbolicity_probe(cheb, julia_backward_cloud(cheb, 20000, 100, 1), 30, 8, 2);
  CHECK_FALSE(r3.hyperbolic_consistent);
}
