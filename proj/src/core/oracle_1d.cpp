#include "coopdyn/oracle_1d.hpp"

#include <algorithm>
#include <cmath>

#include "coopdyn/error.hpp"
#include "coopdyn/rng.hpp"
#include "coopdyn/takagi.hpp"

namespace coopdyn::oracle {

double lebesgue_singular(double a, double x, int depth) {
  require(a > 0.0 && a < 1.0, "lebesgue_singular: a must lie in (0,1)");
  require(x >= 0.0 && x <= 1.0, "lebesgue_singular: x outside [0,1]");
  double value = 0.0, scale = 1.0;
  for (int k = 0; k < depth; ++k) {
    if (x < 0.5) {
      scale *= a;
      x = 2.0 * x;
    } else {
      value += scale * a;
      scale *= 1.0 - a;
      x = 2.0 * x - 1.0;
    }
  }
  return value + scale * x;
}

double takagi_classic(double x, int n_terms) {
  require(n_terms >= 1, "takagi_classic: n_terms must be positive");
  double sum = 0.0, scale = 1.0;
  // 2^n x computed exactly by repeated doubling of the fractional part.
  double f = x - std::floor(x);
  for (int n = 0; n < n_terms; ++n) {
    sum += scale * std::min(f, 1.0 - f);
    f = 2.0 * f;
    f -= std::floor(f);
    scale *= 0.5;
  }
  return sum;
}

double devils_staircase(double x, int depth) {
  require(x >= 0.0 && x <= 1.0, "devils_staircase: x outside [0,1]");
  double value = 0.0, scale = 1.0;
  for (int k = 0; k < depth; ++k) {
    if (x < 1.0 / 3.0) {
      x = 3.0 * x;
    } else if (x <= 2.0 / 3.0) {
      return value + 0.5 * scale;
    } else {
      value += 0.5 * scale;
      x = 3.0 * x - 2.0;
    }
    scale *= 0.5;
  }
  return value + scale * x;
}

void RealAffineSystem::validate() const {
  require(!maps.empty() && maps.size() == weights.size(), "real system: maps and weights must match and be nonempty");
  require(hi > lo, "real system: empty interval");
  double s = 0.0;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    require(std::abs(maps[k].slope) > 1.0, "real system: every map must be expanding");
    require(weights[k] > 0.0, "real system: weights must be positive");
    s += weights[k];
  }
  require(std::abs(s - 1.0) <= 1e-12, "real system: weights must sum to 1");
}

RealAffineSystem RealAffineSystem::doubling(double a) {
  return {{{2.0, 0.0}, {2.0, -1.0}}, {a, 1.0 - a}, 0.0, 1.0};
}

RealAffineSystem RealAffineSystem::cantor() { return {{{3.0, 0.0}, {3.0, -2.0}}, {0.5, 0.5}, 0.0, 1.0}; }

namespace {

bool all_increasing(const RealAffineSystem& s) noexcept {
  return std::all_of(s.maps.begin(), s.maps.end(), [](const AffineMap& g) { return g.slope > 0.0; });
}

constexpr std::size_t kNodeCap = 50'000'000;

}  // namespace

double boundary_value(const RealAffineSystem& s, double x) noexcept {
  if (!all_increasing(s)) return 0.0;
  return x > s.hi ? 1.0 : 0.0;
}

double real_random_T_exact(const RealAffineSystem& s, double x, int depth) {
  s.validate();
  if (x < s.lo || x > s.hi) return boundary_value(s, x);
  const double top = all_increasing(s) ? 1.0 : 0.0;
  struct Item {
    double x, w;
    int level;
  };
  std::vector<Item> stack{{x, 1.0, 0}};
  double value = 0.0;
  std::size_t visited = 0;
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    if (++visited > kNodeCap) fail(ErrorCode::unsupported, "real_random_T: recursion tree exceeds the node cap");
    if (it.level == depth) {
      value += it.w * top * (it.x - s.lo) / (s.hi - s.lo);
      continue;
    }
    for (std::size_t k = 0; k < s.maps.size(); ++k) {
      const double y = s.maps[k](it.x);
      const double w = it.w * s.weights[k];
      if (y < s.lo || y > s.hi) value += w * boundary_value(s, y);
      else stack.push_back({y, w, it.level + 1});
    }
  }
  return value;
}

MonteCarloT real_random_T_monte_carlo(const RealAffineSystem& s, double x, std::size_t n_samples, int n_steps,
                                      std::uint64_t seed) {
  s.validate();
  require(n_samples > 0, "real_random_T: n_samples must be positive");
  const RngStream root(seed);
  std::size_t hits = 0;
  MonteCarloT out;
  for (std::size_t k = 0; k < n_samples; ++k) {
    RngStream rng = root.split(k);
    double y = x;
    bool left = false;
    for (int step = 0; step <= n_steps; ++step) {
      if (y < s.lo || y > s.hi) {
        left = true;
        if (boundary_value(s, y) == 1.0) ++hits;
        break;
      }
      if (step < n_steps) y = s.maps[rng.categorical(s.weights)](y);
    }
    if (!left) ++out.undecided;
  }
  const double n = static_cast<double>(n_samples);
  out.estimate = static_cast<double>(hits) / n;
  out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / n);
  return out;
}

std::vector<double> parameter_derivative_series(const RealAffineSystem& s, const std::vector<double>& xs,
                                                int series_depth, int recursion_depth, double lambda_hat) {
  s.validate();
  require(series_depth >= 1, "parameter_derivative_series: series depth must be positive");
  const std::size_t m = s.maps.size();
  require(m >= 2, "parameter_derivative_series: at least two maps required");
  auto zeta = [&](double y) {
    return real_random_T_exact(s, s.maps[0](y), recursion_depth) -
           real_random_T_exact(s, s.maps[m - 1](y), recursion_depth);
  };
  struct Node {
    double y, w;
  };
  // Level n holds the in-interval points of the n-step expansion of each x.
  std::vector<std::vector<Node>> level(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (xs[k] >= s.lo && xs[k] <= s.hi) level[k] = {{xs[k], 1.0}};
  std::vector<double> psi(xs.size(), 0.0);
  NeumannTruncation rule(lambda_hat, 0.0, series_depth);
  while (rule.state() == NeumannTruncation::State::running) {
    double sup = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      double term = 0.0;
      for (const Node& nd : level[k]) term += nd.w * zeta(nd.y);
      psi[k] += term;
      sup = std::max(sup, std::abs(term));
      std::vector<Node> next;
      for (const Node& nd : level[k])
        for (std::size_t j = 0; j < m; ++j) {
          const double y = s.maps[j](nd.y);
          if (y >= s.lo && y <= s.hi) next.push_back({y, nd.w * s.weights[j]});
        }
      if (next.size() > kNodeCap) fail(ErrorCode::unsupported, "parameter_derivative_series: expansion too large");
      level[k] = std::move(next);
    }
    rule.push(sup);
  }
  if (rule.state() == NeumannTruncation::State::diverged)
    fail(ErrorCode::non_convergence, "parameter_derivative_series: series does not converge");
  return psi;
}

std::vector<double> parameter_derivative_fd(const RealAffineSystem& s, const std::vector<double>& xs, double delta,
                                            int recursion_depth) {
  s.validate();
  const std::size_t m = s.weights.size();
  RealAffineSystem plus = s, minus = s;
  plus.weights[0] += delta;
  plus.weights[m - 1] -= delta;
  minus.weights[0] -= delta;
  minus.weights[m - 1] += delta;
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs)
    out.push_back((real_random_T_exact(plus, x, recursion_depth) - real_random_T_exact(minus, x, recursion_depth)) /
                  (2.0 * delta));
  return out;
}

IntervalOperator::IntervalOperator(RealAffineSystem system, int n_points) : s_(std::move(system)), n_(n_points) {
  s_.validate();
  require(n_points >= 2, "interval operator: at least two nodes required");
}

double IntervalOperator::node(int k) const noexcept { return s_.lo + (s_.hi - s_.lo) * k / (n_ - 1); }

double IntervalOperator::read(const Function& phi, double x) const noexcept {
  if (x < s_.lo) return phi.below;
  if (x > s_.hi) return phi.above;
  const double t = (x - s_.lo) / (s_.hi - s_.lo) * (n_ - 1);
  const int k = std::min(static_cast<int>(t), n_ - 2);
  const double f = t - k;
  const double a = phi.values[static_cast<std::size_t>(k)], b = phi.values[static_cast<std::size_t>(k) + 1];
  return std::clamp((1.0 - f) * a + f * b, std::min(a, b), std::max(a, b));
}

IntervalOperator::Function IntervalOperator::apply(const Function& phi) const {
  require(phi.values.size() == static_cast<std::size_t>(n_), "interval operator: function size mismatch");
  Function out = phi;
  for (int k = 0; k < n_; ++k) {
    double sum = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < s_.maps.size(); ++j) {
      const double r = read(phi, s_.maps[j](node(k)));
      sum += s_.weights[j] * r;
      lo = j == 0 ? r : std::min(lo, r);
      hi = j == 0 ? r : std::max(hi, r);
    }
    out.values[static_cast<std::size_t>(k)] = std::clamp(sum, lo, hi);
  }
  return out;
}

}  // namespace coopdyn::oracle
