#include "coopdyn/transition_operator.hpp"

#include <algorithm>
#include <cmath>

#include "coopdyn/error.hpp"
#include "coopdyn/fractal_sets.hpp"
#include "coopdyn/parallel.hpp"

namespace coopdyn {

TransitionOperator::TransitionOperator(const DiscreteMeasure& measure, const BasinLabelGrid& basins,
                                       std::uint64_t seed)
    : measure_(measure), basins_(std::make_shared<const BasinLabelGrid>(basins)) {
  const GridGeometry& g = basins.geometry;
  g.validate();
  require(basins.labels.size() == g.cells(), "transition operator: label grid size mismatch");
  const std::size_t m = measure.size();
  const auto n = g.resolution;
  const auto captures = make_capture_sets(measure.system, basins.sets, basins.capture_tolerance);
  const bool poly = measure.system.all_polynomial;

  auto bilinear = [&](Complex w) {
    double x, y;
    g.to_grid(w, x, y);
    x = std::clamp(x, 0.0, static_cast<double>(n - 1));
    y = std::clamp(y, 0.0, static_cast<double>(n - 1));
    const int i = std::min(static_cast<int>(x), n - 2);
    const int j = std::min(static_cast<int>(y), n - 2);
    return Entry{static_cast<std::int32_t>(g.index(i, j)), x - i, y - j};
  };

  auto stencil = std::make_shared<std::vector<Entry>>(g.cells() * m);
  auto flags = std::make_shared<std::vector<std::uint8_t>>(g.cells(), 0);
  const RngStream root(seed);
  parallel_for(g.cells(), [&](std::size_t c) {
    const SpherePoint z(g.node(c));
    for (std::size_t j = 0; j < m; ++j) {
      const SpherePoint w = measure.system[j](z);
      Entry& e = (*stencil)[c * m + j];
      if (w.is_finite() && g.contains(w.value())) {
        e = bilinear(w.value());
        continue;
      }
      if (poly && (w.is_infinity() || std::abs(w.value()) >= *measure.system.escape_radius)) {
        e = {-1, 0.0, 0.0};
        continue;
      }
      const std::int32_t label =
          classify_point(measure, captures, w, std::max(basins.depth, 1), std::max(basins.n_words, 1),
                         root.split(c * m + j));
      if (label >= 0 && label == basins.infinity_label && poly) {
        e = {-1, 0.0, 0.0};
      } else if (label >= 0 && !basins.sets[static_cast<std::size_t>(label)].at_infinity) {
        e = bilinear(basins.sets[static_cast<std::size_t>(label)].representative().value());
      } else {
        e = w.is_finite() ? bilinear(w.value()) : Entry{0, 0.0, 0.0};
        (*flags)[c] = 1;
      }
    }
  });
  extrapolated_total_ = static_cast<std::size_t>(std::count(flags->begin(), flags->end(), 1));
  stencil_ = std::move(stencil);
  extrapolated_ = std::move(flags);
}

TransitionOperator TransitionOperator::with_weights(std::vector<double> weights) const {
  TransitionOperator op = *this;
  op.measure_ = reweighted(measure_, std::move(weights));
  return op;
}

GridFunction TransitionOperator::make_function(double fill) const {
  return GridFunction(geometry(), fill, has_infinity());
}

void TransitionOperator::check(const GridFunction& phi) const {
  if (!(phi.geometry == geometry()) || phi.values.size() != geometry().cells())
    fail(ErrorCode::invalid_argument, "transition operator: grid function geometry does not match the basin grid");
}

double TransitionOperator::read(const GridFunction& phi, const Entry& e) const noexcept {
  if (e.base < 0) return phi.value_at_infinity;
  const auto n = static_cast<std::size_t>(geometry().resolution);
  const auto b = static_cast<std::size_t>(e.base);
  const double v00 = phi.values[b], v10 = phi.values[b + 1], v01 = phi.values[b + n], v11 = phi.values[b + n + 1];
  const double v = (1 - e.ty) * ((1 - e.tx) * v00 + e.tx * v10) + e.ty * ((1 - e.tx) * v01 + e.tx * v11);
  return std::clamp(v, std::min({v00, v10, v01, v11}), std::max({v00, v10, v01, v11}));
}

GridFunction TransitionOperator::apply(const GridFunction& phi) const {
  check(phi);
  GridFunction out = phi;
  const std::size_t m = measure_.size();
  const auto& st = *stencil_;
  const auto& p = measure_.weights;
  parallel_for(phi.values.size(), [&](std::size_t c) {
    double sum = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double r = read(phi, st[c * m + j]);
      sum += p[j] * r;
      lo = j == 0 ? r : std::min(lo, r);
      hi = j == 0 ? r : std::max(hi, r);
    }
    // A convex combination stays in the hull of its reads; the clamp removes rounding.
    out.values[c] = std::clamp(sum, lo, hi);
  });
  out.value_at_infinity = phi.value_at_infinity;
  out.iterations = phi.iterations + 1;
  return out;
}

GridFunction TransitionOperator::apply_power(const GridFunction& phi, int power) const {
  require(power >= 1, "transition operator: power must be positive");
  GridFunction out = apply(phi);
  for (int k = 1; k < power; ++k) out = apply(out);
  return out;
}

GridFunction TransitionOperator::compose_read(const GridFunction& phi, std::size_t generator) const {
  check(phi);
  require(generator < measure_.size(), "transition operator: generator index out of range");
  GridFunction out = phi;
  const std::size_t m = measure_.size();
  const auto& st = *stencil_;
  parallel_for(phi.values.size(), [&](std::size_t c) { out.values[c] = read(phi, st[c * m + generator]); });
  return out;
}

GridFunction apply_transition(const DiscreteMeasure& measure, const GridFunction& phi, const BasinLabelGrid& basins) {
  if (!(phi.geometry == basins.geometry))
    fail(ErrorCode::invalid_argument, "apply_transition: grid function geometry does not match the basin grid");
  return TransitionOperator(measure, basins).apply(phi);
}

// ---------------------------------------------------------------- fixed points

GridFunction initial_bump(const TransitionOperator& op, std::size_t set_index, int component, int taper_cells) {
  const BasinLabelGrid& basins = op.basins();
  require(set_index < basins.sets.size(), "solve_T: set index out of range");
  const MinimalSetEstimate& L = basins.sets[set_index];
  const GridGeometry& g = op.geometry();
  const double rho = basins.capture_tolerance;
  const double mu = std::max(1, taper_cells) * g.step();
  GridFunction phi = op.make_function(0.0);
  phi.value_at_infinity = L.at_infinity ? 1.0 : 0.0;

  auto taper = [&](double d) {
    if (d <= 0.0) return 1.0;
    if (d >= mu) return 0.0;
    return 0.5 * (1.0 + std::cos(M_PI * d / mu));
  };

  std::vector<CaptureSet> others;
  for (std::size_t k = 0; k < basins.sets.size(); ++k)
    if (k != set_index) others.emplace_back(basins.sets[k], rho, op.measure().system.escape_radius.value_or(0.0));

  if (L.at_infinity) {
    require(op.has_infinity(), "solve_T: infinity target requires a polynomial system");
    const double R = *op.measure().system.escape_radius;
    parallel_for(g.cells(), [&](std::size_t c) { phi.values[c] = taper(R - std::abs(g.node(c))); });
  } else {
    PointCloud target = L.cloud;
    if (component >= 0) {
      require(static_cast<std::size_t>(component) < L.cycle_components.size(), "solve_T: component out of range");
      target = L.cycle_components[static_cast<std::size_t>(component)];
    }
    const CloudIndex index(target.points);
    parallel_for(g.cells(), [&](std::size_t c) {
      phi.values[c] = taper(index.nearest_distance(SpherePoint(g.node(c))) - rho);
    });
  }
  parallel_for(g.cells(), [&](std::size_t c) {
    if (phi.values[c] > 0.0 && captured_by(others, SpherePoint(g.node(c))) >= 0) phi.values[c] = 0.0;
  });
  phi.name = "bump";
  return phi;
}

FixedPointResult solve_T_fixed_point(const TransitionOperator& op, std::size_t set_index,
                                     const SolveOptions& options) {
  require(options.tol > 0.0, "solve_T: tol must be positive");
  require(options.max_iter >= 1, "solve_T: max_iter must be positive");
  FixedPointResult r;
  GridFunction phi = initial_bump(op, set_index, options.component, options.taper_cells);
  phi.iterations = 0;
  for (int it = 1; it <= options.max_iter; ++it) {
    GridFunction next = op.apply_power(phi, options.power);
    const double inc = sup_distance(next, phi);
    r.history.push_back(inc);
    phi = std::move(next);
    if (inc <= options.tol) {
      r.iterations = it;
      r.T = std::move(phi);
      r.T.iterations = it;
      r.residual = sup_distance(op.apply_power(r.T, options.power), r.T);
      r.min_value = r.T.min_value();
      r.max_value = r.T.max_value();
      if (r.min_value < -options.tol || r.max_value > 1.0 + options.tol)
        fail(ErrorCode::non_convergence, "solve_T: fixed point left [0,1]");
      return r;
    }
  }
  throw NonConvergenceError("solve_T: no convergence within " + std::to_string(options.max_iter) +
                                " iterations (last increment " + std::to_string(r.history.back()) + ")",
                            r.history);
}

RateReport estimate_convergence_rate(const TransitionOperator& op, const GridFunction& phi, int n_iters,
                                     int burn_in) {
  require(n_iters >= 10, "estimate_convergence_rate: n_iters must be at least 10");
  RateReport r;
  r.burn_in = burn_in >= 0 ? burn_in : n_iters / 6;
  require(r.burn_in < n_iters, "estimate_convergence_rate: burn-in exceeds iteration count");
  GridFunction cur = phi;
  for (int n = 0; n < n_iters; ++n) {
    GridFunction next = op.apply(cur);
    r.increments.push_back(sup_distance(next, cur));
    cur = std::move(next);
  }
  constexpr double kNoiseFloor = 1e-14;
  std::vector<double> xs, ys;
  for (int n = r.burn_in; n < n_iters; ++n) {
    const double e = r.increments[static_cast<std::size_t>(n)];
    if (e < kNoiseFloor) break;
    xs.push_back(n);
    ys.push_back(std::log(e));
  }
  r.fit_points = static_cast<int>(xs.size());
  if (xs.size() < 5) {
    r.below_noise_floor = true;
    r.lambda_hat = 0.0;
    r.r_squared = 0.0;
    return r;
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  r.lambda_hat = std::exp(slope);
  r.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  r.hypothesis_flag = r.lambda_hat >= 0.98;
  return r;
}

ProjectionResult project_pi_tau(const TransitionOperator& op, const GridFunction& phi, double tol, int max_iter) {
  const auto& sets = op.basins().sets;
  for (std::size_t k = 0; k < sets.size(); ++k)
    if (sets[k].classification != MinimalSetClass::attracting)
      fail(ErrorCode::unsupported, "project_pi_tau: minimal set " + std::to_string(k) + " is " +
                                       to_string(sets[k].classification) + "; the projection needs attracting sets");
  ProjectionResult out;
  out.pi = op.make_function(0.0);
  out.pi.name = "pi";
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const MinimalSetEstimate& L = sets[k];
    const int r = std::max(1, L.period);
    // Limit of M^{nr} phi read on each cycle component.
    GridFunction lim = phi;
    bool converged = false;
    std::vector<double> history;
    for (int it = 0; it < max_iter; ++it) {
      GridFunction next = op.apply_power(lim, r);
      const double inc = sup_distance(next, lim);
      history.push_back(inc);
      lim = std::move(next);
      if (inc <= tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NonConvergenceError("project_pi_tau: averages did not converge", history);
    std::vector<double> coeffs;
    const std::size_t ncomp = L.at_infinity ? 1 : std::max<std::size_t>(1, L.cycle_components.size());
    for (std::size_t j = 0; j < ncomp; ++j) {
      const SpherePoint rep = L.at_infinity ? SpherePoint::infinity()
                              : L.cycle_components.empty() ? L.representative()
                                                           : L.cycle_components[j].points.front();
      const double c = lim.sample(rep);
      coeffs.push_back(c);
      if (c == 0.0) continue;
      SolveOptions so;
      so.tol = tol;
      so.max_iter = max_iter;
      so.power = r;
      so.component = (L.at_infinity || r == 1) ? -1 : static_cast<int>(j);
      const FixedPointResult T = solve_T_fixed_point(op, k, so);
      for (std::size_t c2 = 0; c2 < out.pi.values.size(); ++c2) out.pi.values[c2] += c * T.T.values[c2];
      out.pi.value_at_infinity += c * T.T.value_at_infinity;
    }
    out.coefficients.push_back(std::move(coeffs));
  }
  return out;
}

}  // namespace coopdyn
