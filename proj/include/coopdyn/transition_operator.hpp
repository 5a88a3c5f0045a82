#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "coopdyn/grid.hpp"
#include "coopdyn/semigroup.hpp"

namespace coopdyn {

/// (M phi)(z) = sum_j p_j phi(h_j(z)) on a node grid.
///
/// Images are resolved once into stencils. An image inside the grid is a
/// bilinear read. An image outside is classified by its orbit: captured by
/// infinity reads value_at_infinity, captured by a finite minimal set reads
/// at that set's representative, and anything else is clamped to the nearest
/// edge and flagged as extrapolated.
class TransitionOperator {
 public:
  TransitionOperator(const DiscreteMeasure& measure, const BasinLabelGrid& basins, std::uint64_t seed = 0);

  /// Same stencils under new weights.
  TransitionOperator with_weights(std::vector<double> weights) const;

  const DiscreteMeasure& measure() const noexcept { return measure_; }
  const BasinLabelGrid& basins() const noexcept { return *basins_; }
  const GridGeometry& geometry() const noexcept { return basins_->geometry; }
  bool has_infinity() const noexcept { return measure_.system.all_polynomial; }

  GridFunction apply(const GridFunction& phi) const;
  /// M applied `power` times.
  GridFunction apply_power(const GridFunction& phi, int power) const;
  /// phi o h_j with the same read policy.
  GridFunction compose_read(const GridFunction& phi, std::size_t generator) const;

  /// Per node: nonzero if some generator's image was clamped.
  const std::vector<std::uint8_t>& extrapolated() const noexcept { return *extrapolated_; }
  std::size_t extrapolated_count() const noexcept { return extrapolated_total_; }

  /// Fresh function on this grid, with an infinity value for polynomial systems.
  GridFunction make_function(double fill = 0.0) const;

 private:
  struct Entry {
    std::int32_t base;  // lower-left node of the bilinear cell, -1 for infinity
    double tx, ty;
  };
  double read(const GridFunction& phi, const Entry& e) const noexcept;
  void check(const GridFunction& phi) const;

  DiscreteMeasure measure_;
  std::shared_ptr<const BasinLabelGrid> basins_;
  std::shared_ptr<const std::vector<Entry>> stencil_;  // cells x generators
  std::shared_ptr<const std::vector<std::uint8_t>> extrapolated_;
  std::size_t extrapolated_total_ = 0;
};

GridFunction apply_transition(const DiscreteMeasure& measure, const GridFunction& phi, const BasinLabelGrid& basins);

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 5000;
  int power = 1;        // iterate M^power (cycle components of period r)
  int component = -1;   // cycle component for the initial bump, -1 for the whole set
  int taper_cells = 5;  // cosine taper width of the initial bump
};

struct FixedPointResult {
  GridFunction T;
  double residual = 0.0;  // ||M^power T - T||_inf
  int iterations = 0;
  std::vector<double> history;
  double min_value = 0.0, max_value = 0.0;
};

/// Smooth bump: 1 on the capture region of the set (or one of its cycle
/// components), cosine taper to 0 over taper_cells nodes.
GridFunction initial_bump(const TransitionOperator& op, std::size_t set_index, int component, int taper_cells);

/// Iterates M^power from the bump until the sup-norm increment is <= tol.
/// Throws NonConvergenceError (carrying the increment history) at max_iter.
FixedPointResult solve_T_fixed_point(const TransitionOperator& op, std::size_t set_index,
                                     const SolveOptions& options);

struct RateReport {
  double lambda_hat = 1.0;
  double r_squared = 0.0;
  bool below_noise_floor = false;
  /// lambda_hat >= 0.98: exponential averaging not observed.
  bool hypothesis_flag = false;
  int burn_in = 0;
  int fit_points = 0;
  std::vector<double> increments;  // e_n = ||M^n phi - M^{n+1} phi||
};

RateReport estimate_convergence_rate(const TransitionOperator& op, const GridFunction& phi, int n_iters,
                                     int burn_in = -1);

struct ProjectionResult {
  GridFunction pi;
  std::vector<std::vector<double>> coefficients;  // c_{L,j}
};

/// pi(phi) = sum_L sum_j c_{L,j} T_{L_j}. Requires every set attracting.
ProjectionResult project_pi_tau(const TransitionOperator& op, const GridFunction& phi, double tol,
                                int max_iter = 5000);

}  // namespace coopdyn
