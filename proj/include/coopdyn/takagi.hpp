#pragma once

#include <cstdint>
#include <vector>

#include "coopdyn/cloud.hpp"
#include "coopdyn/grid.hpp"
#include "coopdyn/semigroup.hpp"
#include "coopdyn/transition_operator.hpp"

namespace coopdyn {

/// zeta(z) = T(h_i(z)) - T(h_m(z)), the last generator being the pivot.
GridFunction zeta_field(const TransitionOperator& op, const GridFunction& T, std::size_t i);

/// Stopping rule for sum_n M^n zeta, shared by the plane and interval
/// series. Feed it ||M^n zeta|| for n = 0, 1, ...
class NeumannTruncation {
 public:
  enum class State { running, converged, diverged, exhausted };

  /// lambda_hat: contraction estimate for the tail bound; tol <= 0 disables
  /// the tolerance test so exactly max_terms terms are summed.
  NeumannTruncation(double lambda_hat, double tol, int max_terms, int divergence_window = 50);

  State push(double term_norm);
  State state() const noexcept { return state_; }
  int terms() const noexcept { return terms_; }
  /// ||M^N zeta|| / (1 - lambda_hat) for the latest term; +inf if lambda_hat >= 1.
  double tail_bound() const noexcept;

 private:
  double lambda_;
  double tol_;
  int max_terms_;
  int window_;
  int terms_ = 0;
  int nondecreasing_run_ = 0;
  double last_ = 0.0;
  State state_ = State::running;
};

struct TakagiResult {
  GridFunction psi;
  int terms = 0;
  double tail_bound = 0.0;
  double residual = 0.0;  // ||(I - M) psi - zeta||_inf
  bool converged = false;
};

/// psi = sum_{n <= N} M^n zeta. Throws NonConvergenceError on divergence.
TakagiResult takagi_series(const TransitionOperator& op, const GridFunction& zeta, double lambda_hat, double tol,
                           int max_terms = 5000);

/// ||(I - M) psi - zeta||_inf.
double takagi_residual(const TransitionOperator& op, const GridFunction& psi, const GridFunction& zeta);

struct FiniteDifferenceReport {
  double max_deviation = 0.0;
  std::vector<double> finite_difference;
  std::vector<double> series;
};

/// Central difference of T_{L, tau_a} in a_i (a_m compensates) at the probes,
/// against psi read at the same points.
FiniteDifferenceReport finite_difference_check(const TransitionOperator& op_b, std::size_t set_index, std::size_t i,
                                               double delta, const std::vector<SpherePoint>& probes,
                                               const GridFunction& psi, const SolveOptions& solve);

/// n_terms-th term of (1/deg gamma_{n,1}) log+|gamma_{n,1}(y)|; after the
/// orbit passes the escape radius it is continued in log coordinates, so
/// the value is exact up to rounding. 0 if the orbit stays bounded.
double green_function_value(const GeneratorSystem& system, const RandomWord& word, const SpherePoint& y,
                            std::size_t n_terms);

struct OmegaEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t n_words = 0;
};

/// Monte Carlo mean over words of sum_c G_gamma(c), c the finite critical
/// points of the first letter.
OmegaEstimate omega_integral_mc(const DiscreteMeasure& measure, std::size_t n_words, std::size_t word_len,
                                std::uint64_t seed);

struct AnalysisReport {
  double u_value = 0.0;
  double u_stderr = 0.0;
  double dimH_lambda = 0.0;
  double dimH_stderr = 0.0;
  double omega_integral = 0.0;
  double omega_stderr = 0.0;
  double entropy_term = 0.0;
  double degree_term = 0.0;
};

AnalysisReport analytic_exponents(const DiscreteMeasure& measure, const OmegaEstimate& omega);

/// Branch-uniform backward sampler for lambda.
PointCloud sample_lambda(const DiscreteMeasure& measure, std::size_t n_points, std::size_t burn_in,
                         std::uint64_t seed);

struct HolderEstimate {
  double exponent = 0.0;
  std::vector<double> radii;
  std::vector<double> oscillations;
};

/// Slope of log osc(phi, B(z0, r)) against log r over r = r_min 2^k <= r_max.
HolderEstimate holder_exponent_estimate(const GridFunction& phi, const SpherePoint& z0, double r_min, double r_max);

}  // namespace coopdyn
