#include "coopdyn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coopdyn/error.hpp"

namespace coopdyn {

namespace {

bool finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double max_modulus(std::span<const Complex> c) noexcept {
  double m = 0.0;
  for (Complex x : c) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

// ---------------------------------------------------------------- SpherePoint

SpherePoint::SpherePoint(Complex z) : z_(z) {
  require(finite(z), "SpherePoint: finite point with non-finite component");
}

SpherePoint SpherePoint::from_complex(Complex z) noexcept {
  if (!finite(z)) return infinity();
  SpherePoint p;
  p.z_ = z;
  return p;
}

SpherePoint SpherePoint::infinity() noexcept {
  SpherePoint p;
  p.infinite_ = true;
  return p;
}

double SpherePoint::modulus() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : std::abs(z_);
}

double chordal_distance(const SpherePoint& p, const SpherePoint& q) noexcept {
  if (p.is_infinity() && q.is_infinity()) return 0.0;
  if (p.is_infinity() || q.is_infinity()) {
    const double r = p.is_infinity() ? std::abs(q.value()) : std::abs(p.value());
    return 2.0 / std::hypot(1.0, r);
  }
  const Complex a = p.value(), b = q.value();
  // Large moduli go through 1/z to keep the products finite.
  if (std::abs(a) > 1e150 || std::abs(b) > 1e150) {
    const Complex ia = 1.0 / a, ib = 1.0 / b;
    return 2.0 * std::abs(ia - ib) / (std::hypot(1.0, std::abs(ia)) * std::hypot(1.0, std::abs(ib)));
  }
  const double d = 2.0 * std::abs(a - b) / (std::hypot(1.0, std::abs(a)) * std::hypot(1.0, std::abs(b)));
  return std::min(d, 2.0);
}

// ---------------------------------------------------------------- polynomials

namespace poly {

Complex eval(std::span<const Complex> c, Complex z) noexcept {
  Complex v(0.0);
  for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k];
  return v;
}

void eval_with_derivative(std::span<const Complex> c, Complex z, Complex& value, Complex& slope) noexcept {
  value = Complex(0.0);
  slope = Complex(0.0);
  for (std::size_t k = c.size(); k-- > 0;) {
    slope = slope * z + value;
    value = value * z + c[k];
  }
}

Polynomial derivative(std::span<const Complex> c) {
  if (c.size() <= 1) return {Complex(0.0)};
  Polynomial d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
  return d;
}

Polynomial multiply(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() || b.empty()) return {};
  Polynomial r(a.size() + b.size() - 1, Complex(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Polynomial add(std::span<const Complex> a, std::span<const Complex> b) {
  Polynomial r(std::max(a.size(), b.size()), Complex(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Polynomial scale(std::span<const Complex> a, Complex s) {
  Polynomial r(a.begin(), a.end());
  for (auto& x : r) x *= s;
  return r;
}

Polynomial trimmed(std::span<const Complex> c, double rel_tol) {
  Polynomial r(c.begin(), c.end());
  const double cutoff = rel_tol * max_modulus(c);
  while (r.size() > 1 && std::abs(r.back()) <= cutoff) r.pop_back();
  if (r.size() == 1 && std::abs(r.back()) <= cutoff && cutoff > 0.0) r.back() = Complex(0.0);
  return r;
}

int degree(std::span<const Complex> c) noexcept {
  for (std::size_t k = c.size(); k-- > 0;)
    if (c[k] != Complex(0.0)) return static_cast<int>(k);
  return -1;
}

}  // namespace poly

// ---------------------------------------------------------------- RationalMap

RationalMap::RationalMap(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  require(!num_.empty() && !den_.empty(), "RationalMap: empty coefficient list");
  for (Complex c : num_) require(finite(c), "RationalMap: non-finite numerator coefficient");
  for (Complex c : den_) require(finite(c), "RationalMap: non-finite denominator coefficient");
  require(std::abs(num_.back()) > kCoefficientTolerance || num_.size() == 1,
          "RationalMap: numerator leading coefficient below tolerance");
  require(std::abs(den_.back()) > kCoefficientTolerance, "RationalMap: denominator leading coefficient below tolerance");

  if (den_.size() == 1) {
    const Complex c = den_[0];
    for (auto& a : num_) a /= c;
    den_ = {Complex(1.0)};
  } else {
    const Complex c = den_.back();
    for (auto& a : num_) a /= c;
    for (auto& b : den_) b /= c;
  }
  polynomial_ = den_.size() == 1;
  const int dn = static_cast<int>(num_.size()) - 1;
  const int dd = static_cast<int>(den_.size()) - 1;
  degree_ = std::max(dn, dd);
  require(degree_ >= 1, "RationalMap: map must be non-constant (degree >= 1)");
  require(!(dn == 0 && num_[0] == Complex(0.0)), "RationalMap: zero numerator gives a constant map");

  if (!polynomial_) {
    for (const Root& r : polynomial_roots(den_)) {
      const Complex z = r.point.value();
      const double scale = std::max(1e-300, [&] {
        double s = 0.0;
        for (std::size_t k = num_.size(); k-- > 0;) s = s * std::abs(z) + std::abs(num_[k]);
        return s;
      }());
      require(std::abs(poly::eval(num_, z)) / scale > kCommonRootTolerance,
              "RationalMap: numerator and denominator share a root");
    }
  }

  plane_.p = num_;
  plane_.q = den_;
  const auto d = static_cast<std::size_t>(degree_);
  reversed_.p.assign(d + 1, Complex(0.0));
  reversed_.q.assign(d + 1, Complex(0.0));
  for (std::size_t k = 0; k < num_.size(); ++k) reversed_.p[d - k] = num_[k];
  for (std::size_t k = 0; k < den_.size(); ++k) reversed_.q[d - k] = den_[k];
  for (Chart* c : {&plane_, &reversed_}) {
    c->dp = poly::derivative(c->p);
    c->dq = poly::derivative(c->q);
  }
}

SpherePoint RationalMap::eval_chart(const Chart& chart, Complex w) const noexcept {
  const Complex p = poly::eval(chart.p, w);
  const Complex q = poly::eval(chart.q, w);
  if (!finite(p) || !finite(q)) return SpherePoint::infinity();  // caller retries in the other chart
  if (q == Complex(0.0)) return SpherePoint::infinity();
  return SpherePoint::from_complex(p / q);
}

SpherePoint RationalMap::operator()(const SpherePoint& z) const noexcept {
  if (z.is_finite() && std::abs(z.value()) <= kChartSwitchModulus) {
    const Complex p = poly::eval(plane_.p, z.value());
    const Complex q = poly::eval(plane_.q, z.value());
    if (finite(p) && finite(q)) {
      if (q == Complex(0.0)) return SpherePoint::infinity();
      return SpherePoint::from_complex(p / q);
    }
    // Overflow in the plane chart: fall through to w = 1/z.
  }
  const Complex w = z.is_infinity() ? Complex(0.0) : 1.0 / z.value();
  return eval_chart(reversed_, w);
}

double RationalMap::derivative_chart(const Chart& chart, Complex w) const noexcept {
  Complex p, dp, q, dq;
  poly::eval_with_derivative(chart.p, w, p, dp);
  poly::eval_with_derivative(chart.q, w, q, dq);
  const double s = std::max(std::abs(p), std::abs(q));
  if (!(s > 0.0) || !std::isfinite(s)) return std::numeric_limits<double>::quiet_NaN();
  p /= s;
  q /= s;
  dp /= s;
  dq /= s;
  const double wronskian = std::abs(dp * q - p * dq);
  const double aw = std::abs(w);
  return wronskian * (1.0 + aw * aw) / (std::norm(p) + std::norm(q));
}

double RationalMap::spherical_derivative(const SpherePoint& z) const noexcept {
  if (z.is_finite() && std::abs(z.value()) <= kChartSwitchModulus) {
    const double v = derivative_chart(plane_, z.value());
    if (std::isfinite(v)) return v;
  }
  const Complex w = z.is_infinity() ? Complex(0.0) : 1.0 / z.value();
  const double v = derivative_chart(reversed_, w);
  return std::isfinite(v) ? v : 0.0;
}

SpherePoint eval_map(const RationalMap& map, const SpherePoint& z) noexcept { return map(z); }

double spherical_derivative_norm(const RationalMap& map, const SpherePoint& z) noexcept {
  return map.spherical_derivative(z);
}

namespace {

// Roots of `p` padded with infinity up to `total` entries.
std::vector<Root> roots_padded(const Polynomial& p, int total) {
  std::vector<Root> out;
  if (poly::degree(p) > 0) out = polynomial_roots(p);
  while (static_cast<int>(out.size()) < total) out.push_back({SpherePoint::infinity(), true});
  return out;
}

}  // namespace

std::vector<Root> preimages(const RationalMap& map, const SpherePoint& w) {
  Polynomial eq;
  if (w.is_infinity()) {
    eq = map.denominator();
  } else {
    eq = poly::add(map.numerator(), poly::scale(map.denominator(), -w.value()));
    eq = poly::trimmed(eq, 1e-13);
  }
  std::vector<Root> out = roots_padded(eq, map.degree());
  for (Root& r : out) {
    if (chordal_distance(map(r.point), w) > 1e-8) r.converged = false;
  }
  return out;
}

std::vector<Root> critical_points(const RationalMap& map) {
  const Polynomial& n = map.numerator();
  const Polynomial& d = map.denominator();
  Polynomial w = poly::add(poly::multiply(poly::derivative(n), d), poly::scale(poly::multiply(n, poly::derivative(d)), -1.0));
  w = poly::trimmed(w, 1e-12);
  if (poly::degree(w) <= 0) return {};
  return polynomial_roots(w);
}

std::vector<Root> fixed_points(const RationalMap& map) {
  const Polynomial z{Complex(0.0), Complex(1.0)};
  Polynomial eq = poly::add(map.numerator(), poly::scale(poly::multiply(z, map.denominator()), -1.0));
  eq = poly::trimmed(eq, 1e-13);
  std::vector<Root> out = roots_padded(eq, map.degree() + 1);
  for (Root& r : out)
    if (r.point.is_finite() && chordal_distance(map(r.point), r.point) > 1e-8) r.converged = false;
  return out;
}

RationalMap compose(const RationalMap& f, const RationalMap& g) {
  const auto d = static_cast<std::size_t>(f.degree());
  const Polynomial& ng = g.numerator();
  const Polynomial& dg = g.denominator();
  std::vector<Polynomial> npow{{Complex(1.0)}}, dpow{{Complex(1.0)}};
  for (std::size_t k = 1; k <= d; ++k) {
    npow.push_back(poly::multiply(npow.back(), ng));
    dpow.push_back(poly::multiply(dpow.back(), dg));
  }
  auto substitute = [&](const Polynomial& c) {
    Polynomial acc{Complex(0.0)};
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] == Complex(0.0)) continue;
      acc = poly::add(acc, poly::scale(poly::multiply(npow[k], dpow[d - k]), c[k]));
    }
    return acc;
  };
  Polynomial num = substitute(f.numerator());
  Polynomial den = substitute(f.denominator());
  for (const Polynomial* p : {&num, &den})
    for (Complex c : *p)
      if (!finite(c) || std::abs(c) > 1e300)
        fail(ErrorCode::overflow, "compose: coefficient overflow; evaluate the orbit map by map instead");
  num = poly::trimmed(num, 1e-14);
  den = poly::trimmed(den, 1e-14);
  return RationalMap(std::move(num), std::move(den));
}

}  // namespace coopdyn
