#include "coopdyn/takagi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coopdyn/error.hpp"
#include "coopdyn/fractal_sets.hpp"
#include "coopdyn/parallel.hpp"

namespace coopdyn {

GridFunction zeta_field(const TransitionOperator& op, const GridFunction& T, std::size_t i) {
  const std::size_t m = op.measure().size();
  require(m >= 2 && i + 1 < m, "zeta_field: generator index must be below the pivot (last generator)");
  GridFunction a = op.compose_read(T, i);
  const GridFunction b = op.compose_read(T, m - 1);
  for (std::size_t c = 0; c < a.values.size(); ++c) a.values[c] -= b.values[c];
  a.value_at_infinity = 0.0;
  a.name = "zeta";
  a.iterations = 0;
  return a;
}

NeumannTruncation::NeumannTruncation(double lambda_hat, double tol, int max_terms, int divergence_window)
    : lambda_(lambda_hat), tol_(tol), max_terms_(max_terms), window_(divergence_window) {
  require(max_terms >= 1, "Neumann truncation: max_terms must be positive");
}

double NeumannTruncation::tail_bound() const noexcept {
  if (lambda_ >= 1.0) return std::numeric_limits<double>::infinity();
  return last_ / (1.0 - std::max(0.0, lambda_));
}

NeumannTruncation::State NeumannTruncation::push(double term_norm) {
  if (state_ != State::running) return state_;
  if (terms_ > 0 && term_norm >= last_ && term_norm > 0.0) ++nondecreasing_run_;
  else nondecreasing_run_ = 0;
  last_ = term_norm;
  ++terms_;
  if (term_norm == 0.0 || (tol_ > 0.0 && tail_bound() <= tol_)) state_ = State::converged;
  else if (nondecreasing_run_ >= window_) state_ = State::diverged;
  else if (terms_ >= max_terms_) state_ = State::exhausted;
  return state_;
}

double takagi_residual(const TransitionOperator& op, const GridFunction& psi, const GridFunction& zeta) {
  const GridFunction Mpsi = op.apply(psi);
  double r = op.has_infinity() ? std::abs(psi.value_at_infinity - Mpsi.value_at_infinity - zeta.value_at_infinity)
                               : 0.0;
  for (std::size_t c = 0; c < psi.values.size(); ++c)
    r = std::max(r, std::abs(psi.values[c] - Mpsi.values[c] - zeta.values[c]));
  return r;
}

TakagiResult takagi_series(const TransitionOperator& op, const GridFunction& zeta, double lambda_hat, double tol,
                           int max_terms) {
  TakagiResult out;
  out.psi = zeta;
  out.psi.name = "psi";
  NeumannTruncation rule(lambda_hat, tol, max_terms);
  GridFunction term = zeta;
  auto state = rule.push(term.sup_norm());
  std::vector<double> history{term.sup_norm()};
  while (state == NeumannTruncation::State::running) {
    term = op.apply(term);
    for (std::size_t c = 0; c < term.values.size(); ++c) out.psi.values[c] += term.values[c];
    out.psi.value_at_infinity += term.value_at_infinity;
    history.push_back(term.sup_norm());
    state = rule.push(history.back());
  }
  if (state == NeumannTruncation::State::diverged)
    throw NonConvergenceError("takagi_series: partial sums do not converge (increments non-decreasing)", history);
  out.terms = rule.terms();
  out.tail_bound = rule.tail_bound();
  out.converged = state == NeumannTruncation::State::converged;
  out.psi.iterations = out.terms;
  out.residual = takagi_residual(op, out.psi, zeta);
  return out;
}

FiniteDifferenceReport finite_difference_check(const TransitionOperator& op_b, std::size_t set_index, std::size_t i,
                                               double delta, const std::vector<SpherePoint>& probes,
                                               const GridFunction& psi, const SolveOptions& solve) {
  const auto& b = op_b.measure().weights;
  const std::size_t m = b.size();
  require(m >= 2 && i + 1 < m, "finite_difference_check: generator index must be below the pivot");
  require(delta > 0.0, "finite_difference_check: delta must be positive");
  std::vector<double> plus = b, minus = b;
  plus[i] += delta;
  plus[m - 1] -= delta;
  minus[i] -= delta;
  minus[m - 1] += delta;
  for (std::size_t k = 0; k < m; ++k)
    if (!(plus[k] > 0.0 && minus[k] > 0.0))
      fail(ErrorCode::invalid_argument, "finite_difference_check: a +/- delta e_i leaves the weight simplex");
  const FixedPointResult Tp = solve_T_fixed_point(op_b.with_weights(plus), set_index, solve);
  const FixedPointResult Tm = solve_T_fixed_point(op_b.with_weights(minus), set_index, solve);
  FiniteDifferenceReport r;
  for (const auto& z : probes) {
    const double fd = (Tp.T.sample(z) - Tm.T.sample(z)) / (2.0 * delta);
    const double s = psi.sample(z);
    r.finite_difference.push_back(fd);
    r.series.push_back(s);
    r.max_deviation = std::max(r.max_deviation, std::abs(fd - s));
  }
  return r;
}

double green_function_value(const GeneratorSystem& system, const RandomWord& word, const SpherePoint& y,
                            std::size_t n_terms) {
  require(system.all_polynomial, "green_function_value: polynomial system required");
  require(word.size() >= n_terms, "green_function_value: word shorter than n_terms");
  const double R = *system.escape_radius;
  if (y.is_infinity()) return std::numeric_limits<double>::infinity();
  Complex z = y.value();
  bool escaped = std::abs(z) >= R;
  Complex u = escaped ? std::log(z) : Complex(0.0);
  double D = 1.0;
  for (std::size_t n = 0; n < n_terms; ++n) {
    const RationalMap& h = system[word[n]];
    const int d = h.degree();
    D *= d;
    if (!escaped) {
      z = h(SpherePoint(z)).value();
      if (std::abs(z) >= R) {
        escaped = true;
        u = std::log(z);
      }
      continue;
    }
    // log h(e^u) = log a_d + d u + log(1 + sum_{k<d} (a_k/a_d) e^{-(d-k) u}).
    const Polynomial& a = h.numerator();
    const Complex lead = a[static_cast<std::size_t>(d)];
    Complex corr(1.0);
    for (int k = 0; k < d; ++k) {
      const Complex c = a[static_cast<std::size_t>(k)];
      if (c == Complex(0.0)) continue;
      corr += (c / lead) * std::exp(-static_cast<double>(d - k) * u);
    }
    u = std::log(lead) + static_cast<double>(d) * u + std::log(corr);
  }
  return escaped ? u.real() / D : 0.0;
}

OmegaEstimate omega_integral_mc(const DiscreteMeasure& measure, std::size_t n_words, std::size_t word_len,
                                std::uint64_t seed) {
  require(measure.system.all_polynomial, "omega_integral_mc: polynomial system required");
  require(n_words >= 2 && word_len >= 1, "omega_integral_mc: need n_words >= 2 and word_len >= 1");
  std::vector<std::vector<SpherePoint>> crit(measure.size());
  for (std::size_t j = 0; j < measure.size(); ++j)
    for (const Root& r : critical_points(measure.system[j])) crit[j].push_back(r.point);
  std::vector<double> omega(n_words, 0.0);
  const RngStream root(seed);
  parallel_for(n_words, [&](std::size_t w) {
    RngStream rng = root.split(w);
    const RandomWord word = sample_word(measure, word_len, rng);
    double s = 0.0;
    for (const auto& c : crit[word[0]]) s += green_function_value(measure.system, word, c, word_len);
    omega[w] = s;
  });
  OmegaEstimate e;
  e.n_words = n_words;
  double sum = 0.0;
  for (double v : omega) sum += v;
  e.estimate = sum / static_cast<double>(n_words);
  double ss = 0.0;
  for (double v : omega) ss += (v - e.estimate) * (v - e.estimate);
  e.stderr_ = std::sqrt(ss / static_cast<double>(n_words - 1) / static_cast<double>(n_words));
  return e;
}

AnalysisReport analytic_exponents(const DiscreteMeasure& measure, const OmegaEstimate& omega) {
  require(measure.system.all_polynomial, "analytic_exponents: polynomial system required");
  AnalysisReport r;
  for (std::size_t j = 0; j < measure.size(); ++j) {
    const double p = measure.weights[j];
    r.entropy_term -= p * std::log(p);
    r.degree_term += p * std::log(static_cast<double>(measure.system[j].degree()));
  }
  r.omega_integral = omega.estimate;
  r.omega_stderr = omega.stderr_;
  const double denom = r.degree_term + omega.estimate;
  if (!(denom > 0.0)) fail(ErrorCode::invalid_argument, "analytic_exponents: nonpositive denominator");
  r.u_value = r.entropy_term / denom;
  r.dimH_lambda = (r.degree_term + r.entropy_term) / denom;
  r.u_stderr = r.u_value * omega.stderr_ / denom;
  r.dimH_stderr = r.dimH_lambda * omega.stderr_ / denom;
  return r;
}

PointCloud sample_lambda(const DiscreteMeasure& measure, std::size_t n_points, std::size_t burn_in,
                         std::uint64_t seed) {
  return backward_chaos_game(measure, n_points, burn_in, seed, CloudTag::lambda);
}

HolderEstimate holder_exponent_estimate(const GridFunction& phi, const SpherePoint& z0, double r_min, double r_max) {
  require(z0.is_finite(), "holder_exponent_estimate: z0 must be finite");
  require(r_min > 0.0 && r_max >= r_min, "holder_exponent_estimate: invalid scale range");
  const GridGeometry& g = phi.geometry;
  const Complex d = z0.value() - g.center;
  require(std::abs(d.real()) + r_max <= g.half_width && std::abs(d.imag()) + r_max <= g.half_width,
          "holder_exponent_estimate: ball leaves the grid");
  const double s = g.step();
  HolderEstimate out;
  for (double r = r_min; r <= r_max * (1.0 + 1e-12); r *= 2.0) {
    // Nodes whose cells meet the ball.
    const double reach = r + s / std::sqrt(2.0);
    double x, y;
    g.to_grid(z0.value(), x, y);
    const int i0 = std::max(0, static_cast<int>(std::floor(x - reach / s)));
    const int i1 = std::min(g.resolution - 1, static_cast<int>(std::ceil(x + reach / s)));
    const int j0 = std::max(0, static_cast<int>(std::floor(y - reach / s)));
    const int j1 = std::min(g.resolution - 1, static_cast<int>(std::ceil(y + reach / s)));
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        if (std::abs(g.node(i, j) - z0.value()) > reach) continue;
        const double v = phi.values[g.index(i, j)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    const double osc = hi - lo;
    if (osc > 0.0 && std::isfinite(osc)) {
      out.radii.push_back(r);
      out.oscillations.push_back(osc);
    }
  }
  if (out.radii.size() < 4) fail(ErrorCode::invalid_argument, "holder_exponent_estimate: fewer than 4 usable scales");
  const double k = static_cast<double>(out.radii.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < out.radii.size(); ++i) {
    mx += std::log(out.radii[i]);
    my += std::log(out.oscillations[i]);
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < out.radii.size(); ++i) {
    const double dx = std::log(out.radii[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(out.oscillations[i]) - my);
  }
  out.exponent = sxy / sxx;
  return out;
}

}  // namespace coopdyn
