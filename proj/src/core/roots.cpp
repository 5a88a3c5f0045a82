#include <algorithm>
#include <cmath>
#include <limits>

#include "coopdyn/error.hpp"
#include "coopdyn/geometry.hpp"

namespace coopdyn {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxAberthIterations = 1000;

// Sum |c_k| |z|^k, the scale of rounding error in a Horner evaluation.
double horner_scale(std::span<const Complex> c, double r) noexcept {
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * r + std::abs(c[k]);
  return s;
}

bool backward_stable(std::span<const Complex> c, Complex z, Complex value) noexcept {
  return std::abs(value) <= 16.0 * kEps * horner_scale(c, std::abs(z));
}

std::vector<Complex> quadratic_roots(Complex c0, Complex c1) {
  // z^2 + c1 z + c0, cancellation-free form.
  const Complex disc = std::sqrt(c1 * c1 - 4.0 * c0);
  const Complex q = (std::real(std::conj(c1) * disc) >= 0.0) ? -0.5 * (c1 + disc) : -0.5 * (c1 - disc);
  if (q == Complex(0.0)) return {Complex(0.0), Complex(0.0)};
  return {q, c0 / q};
}

}  // namespace

std::vector<Root> polynomial_roots(std::span<const Complex> coeffs) {
  Polynomial p = poly::trimmed(coeffs);
  const int n = poly::degree(p);
  require(n >= 0, "polynomial_roots: zero polynomial has no isolated roots");
  std::vector<Root> out;
  if (n == 0) return out;

  // Exact zero roots are split off so that z^k factors come back as exact 0.
  std::size_t zeros = 0;
  while (zeros < p.size() && p[zeros] == Complex(0.0)) ++zeros;
  for (std::size_t k = 0; k < zeros; ++k) out.push_back({SpherePoint(Complex(0.0)), true});
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(zeros));
  const int m = n - static_cast<int>(zeros);
  if (m == 0) return out;

  const Complex lead = p.back();
  Polynomial monic(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) monic[k] = p[k] / lead;

  if (m == 1) {
    out.push_back({SpherePoint(-monic[0]), true});
    return out;
  }
  if (m == 2) {
    for (Complex z : quadratic_roots(monic[0], monic[1])) out.push_back({SpherePoint(z), true});
    return out;
  }

  // Aberth-Ehrlich with starting points on a circle bounding the roots.
  double radius = 0.0;
  for (int k = 0; k < m; ++k)
    radius = std::max(radius, std::pow(std::abs(monic[static_cast<std::size_t>(k)]), 1.0 / (m - k)));
  radius = std::max(radius, 1e-3);
  const Complex centre = -monic[static_cast<std::size_t>(m - 1)] / static_cast<double>(m);
  std::vector<Complex> z(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double angle = 2.0 * M_PI * k / m + 0.4;
    z[static_cast<std::size_t>(k)] = centre + radius * Complex(std::cos(angle), std::sin(angle));
  }
  std::vector<bool> done(z.size(), false);
  for (int it = 0; it < kMaxAberthIterations; ++it) {
    bool all_done = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (done[k]) continue;
      Complex value, slope;
      poly::eval_with_derivative(monic, z[k], value, slope);
      if (value == Complex(0.0) || backward_stable(monic, z[k], value)) {
        done[k] = true;
        continue;
      }
      const Complex ratio = value / slope;
      Complex repulsion(0.0);
      for (std::size_t j = 0; j < z.size(); ++j)
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      const Complex delta = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(delta.real()) || !std::isfinite(delta.imag())) {
        all_done = false;
        continue;
      }
      z[k] -= delta;
      if (std::abs(delta) <= 4.0 * kEps * std::max(std::abs(z[k]), 1e-300)) done[k] = true;
      else all_done = false;
    }
    if (all_done) break;
  }

  for (std::size_t k = 0; k < z.size(); ++k) {
    // One Newton polish, kept only when it does not increase the residual.
    Complex value, slope;
    poly::eval_with_derivative(monic, z[k], value, slope);
    if (slope != Complex(0.0)) {
      const Complex candidate = z[k] - value / slope;
      const Complex polished = poly::eval(monic, candidate);
      if (std::isfinite(candidate.real()) && std::isfinite(candidate.imag()) &&
          std::abs(polished) <= std::abs(value)) {
        z[k] = candidate;
        value = polished;
      }
    }
    const bool ok = done[k] || backward_stable(monic, z[k], value);
    out.push_back({SpherePoint(z[k]), ok});
  }
  return out;
}

}  // namespace coopdyn
