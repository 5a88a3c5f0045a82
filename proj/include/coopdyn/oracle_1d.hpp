#pragma once

#include <cstdint>
#include <vector>

namespace coopdyn::oracle {

/// L_a by the dyadic recursion; error <= max(a, 1-a)^depth.
double lebesgue_singular(double a, double x, int depth = 50);

/// sum_{n < n_terms} 2^{-n} dist(2^n x, Z); tail <= 2^{1-n_terms}.
double takagi_classic(double x, int n_terms);

/// Cantor function by ternary recursion.
double devils_staircase(double x, int depth = 50);

struct AffineMap {
  double slope;
  double offset;
  double operator()(double x) const noexcept { return slope * x + offset; }
};

/// Expanding affine maps with weights over an invariant interval.
struct RealAffineSystem {
  std::vector<AffineMap> maps;
  std::vector<double> weights;
  double lo = 0.0, hi = 1.0;

  void validate() const;
  /// g1 = 2x, g2 = 2(x-1)+1 with weights (a, 1-a).
  static RealAffineSystem doubling(double a);
  /// g1 = 3x, g2 = 3(x-1)+1 with weights (1/2, 1/2).
  static RealAffineSystem cantor();
};

/// Limit of T for a point that left the interval: 1 above, 0 below, when
/// every slope is positive; otherwise orbits alternate sides and never
/// settle at +inf, so 0.
double boundary_value(const RealAffineSystem& s, double x) noexcept;

/// Exact self-consistency recursion T(x) = sum_k p_k T(g_k x) to `depth`
/// levels; at the depth cut the linear interpolant of the boundary values
/// stands in for T.
double real_random_T_exact(const RealAffineSystem& s, double x, int depth = 50);

struct MonteCarloT {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t undecided = 0;
};

MonteCarloT real_random_T_monte_carlo(const RealAffineSystem& s, double x, std::size_t n_samples, int n_steps,
                                      std::uint64_t seed);

/// sum_n (M^n zeta)(x) with zeta(x) = T(g_1 x) - T(g_m x), evaluated by pruned
/// depth-first expansion. Truncated with the shared Neumann rule.
std::vector<double> parameter_derivative_series(const RealAffineSystem& s, const std::vector<double>& xs,
                                                int series_depth = 40, int recursion_depth = 50,
                                                double lambda_hat = 0.5);

/// Central difference of T_exact in the first weight (last weight compensates).
std::vector<double> parameter_derivative_fd(const RealAffineSystem& s, const std::vector<double>& xs, double delta,
                                            int recursion_depth = 50);

/// Interval analogue of the plane operator on a uniform grid with absorbing
/// boundary values below and above the interval.
class IntervalOperator {
 public:
  IntervalOperator(RealAffineSystem system, int n_points);

  struct Function {
    std::vector<double> values;
    double below = 0.0, above = 0.0;
  };

  int size() const noexcept { return n_; }
  double node(int k) const noexcept;
  Function apply(const Function& phi) const;

 private:
  double read(const Function& phi, double x) const noexcept;
  RealAffineSystem s_;
  int n_;
};

}  // namespace coopdyn::oracle
