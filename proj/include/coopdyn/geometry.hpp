#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace coopdyn {

using Complex = std::complex<double>;

/// A point of the Riemann sphere: a finite complex number or the point at
/// infinity. Infinity is never encoded as a large finite value.
class SpherePoint {
 public:
  SpherePoint() = default;
  SpherePoint(Complex z);  // NOLINT: implicit on purpose, finite points read naturally

  /// Finite point, or infinity if `z` has a non-finite component.
  static SpherePoint from_complex(Complex z) noexcept;
  static SpherePoint infinity() noexcept;

  bool is_infinity() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  /// Precondition: finite.
  Complex value() const noexcept { return z_; }
  /// |z|, +inf at infinity.
  double modulus() const noexcept;

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.z_ == b.z_);
  }

 private:
  Complex z_{};
  bool infinite_ = false;
};

/// Chordal metric of diameter 2:
///   d(z,w) = 2|z-w| / (sqrt(1+|z|^2) sqrt(1+|w|^2)),  d(z,inf) = 2 / sqrt(1+|z|^2).
double chordal_distance(const SpherePoint& p, const SpherePoint& q) noexcept;

/// Dense polynomial, coefficients in ascending degree.
using Polynomial = std::vector<Complex>;

namespace poly {
Complex eval(std::span<const Complex> coeffs, Complex z) noexcept;
/// Evaluates p and p' together.
void eval_with_derivative(std::span<const Complex> coeffs, Complex z, Complex& value, Complex& slope) noexcept;
Polynomial derivative(std::span<const Complex> coeffs);
Polynomial multiply(std::span<const Complex> a, std::span<const Complex> b);
Polynomial add(std::span<const Complex> a, std::span<const Complex> b);
Polynomial scale(std::span<const Complex> a, Complex s);
/// Drops leading coefficients with modulus <= rel_tol * max|coeff|.
Polynomial trimmed(std::span<const Complex> coeffs, double rel_tol = 0.0);
/// Degree after exact-zero trimming; -1 for the zero polynomial.
int degree(std::span<const Complex> coeffs) noexcept;
}  // namespace poly

/// Root of a polynomial plus a flag telling whether the iteration met its
/// convergence test. Roots are never silently dropped.
struct Root {
  SpherePoint point;
  bool converged = true;
};

/// All complex roots, with multiplicity, of the polynomial (ascending
/// coefficients, leading coefficient nonzero). Aberth-Ehrlich iteration
/// followed by one Newton polish.
std::vector<Root> polynomial_roots(std::span<const Complex> coeffs);

/// Non-constant rational self-map of the sphere, num/den.
class RationalMap {
 public:
  static constexpr double kCoefficientTolerance = 1e-12;
  static constexpr double kCommonRootTolerance = 1e-9;
  static constexpr double kChartSwitchModulus = 1e8;

  /// Validates and normalizes: den is made monic, a constant den is folded
  /// into num. Throws Error(invalid_argument) on degenerate input.
  RationalMap(Polynomial numerator, Polynomial denominator = {Complex(1.0, 0.0)});

  static RationalMap polynomial(Polynomial coeffs) { return RationalMap(std::move(coeffs)); }
  static RationalMap identity() { return RationalMap({Complex(0.0), Complex(1.0)}); }

  const Polynomial& numerator() const noexcept { return num_; }
  const Polynomial& denominator() const noexcept { return den_; }
  int degree() const noexcept { return degree_; }
  bool is_polynomial() const noexcept { return polynomial_; }

  SpherePoint operator()(const SpherePoint& z) const noexcept;

  /// ||Dh_z|| in the spherical metric.
  double spherical_derivative(const SpherePoint& z) const noexcept;

  friend bool operator==(const RationalMap& a, const RationalMap& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  // Pair of polynomials P/Q evaluated in one chart.
  struct Chart {
    Polynomial p, q, dp, dq;
  };
  SpherePoint eval_chart(const Chart& chart, Complex w) const noexcept;
  double derivative_chart(const Chart& chart, Complex w) const noexcept;

  Polynomial num_, den_;
  int degree_ = 0;
  bool polynomial_ = true;
  Chart plane_;     // z chart: N(z)/D(z)
  Chart reversed_;  // w = 1/z chart: h(1/w) = P(w)/Q(w)
};

SpherePoint eval_map(const RationalMap& map, const SpherePoint& z) noexcept;
double spherical_derivative_norm(const RationalMap& map, const SpherePoint& z) noexcept;

/// Solutions of h(z) = w with multiplicity; always deg(h) entries. Each root
/// is flagged unconverged when chordal(h(z), w) > 1e-8 after polishing.
std::vector<Root> preimages(const RationalMap& map, const SpherePoint& w);

/// Finite critical points with multiplicity (roots of N'D - ND').
std::vector<Root> critical_points(const RationalMap& map);

/// Solutions of h(z) = z, with multiplicity, infinity included when fixed.
std::vector<Root> fixed_points(const RationalMap& map);

/// f o g. Throws Error(overflow) if coefficients exceed double range.
RationalMap compose(const RationalMap& f, const RationalMap& g);

}  // namespace coopdyn
