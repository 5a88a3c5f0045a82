// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "coopdyn/commands.hpp"
#include "coopdyn/error.hpp"
#include "coopdyn/fractal_sets.hpp"
#include "coopdyn/minimal_sets.hpp"
#include "coopdyn/oracle_1d.hpp"
#include "coopdyn/scenario.hpp"
#include "coopdyn/takagi.hpp"
#include "coopdyn/transition_operator.hpp"

using namespace coopdyn;
using io::json;

namespace {

std::string scenario_path(const std::string& name) { return std::string(COOPDYN_SCENARIO_DIR) + "/" + name; }

struct Timed {
  CommandResult result;
  double seconds = 0.0;
};

Timed run(const std::string& command, const std::string& scenario) {
  const Scenario s = parse_scenario_file(scenario_path(scenario));
  const auto t0 = std::chrono::steady_clock::now();
  Timed t{run_command(command, s), 0.0};
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), sec);
  std::fflush(stdout);
}

template <class Apply, class Make, class Combine, class Range>
Outcome markov_axioms(int trials, std::uint64_t seed, Make make, Apply apply, Combine combine, Range range) {
  RngStream rng(seed);
  double one_err = 0.0, lin_err = 0.0;
  bool positive = true, contracting = true;
  {
    const auto ones = make(rng, 1.0, 1.0);
    const auto [lo, hi] = range(apply(ones));
    one_err = std::max(std::abs(lo - 1.0), std::abs(hi - 1.0));
  }
  for (int t = 0; t < trials; ++t) {
    const auto f = make(rng, 0.0, 1.0);
    const auto Mf = apply(f);
    positive = positive && range(Mf).first >= 0.0;
    const auto g = make(rng, -3.0, 3.0);
    const auto Mg = apply(g);
    const auto [glo, ghi] = range(g);
    const auto [mlo, mhi] = range(Mg);
    contracting = contracting && std::max(std::abs(mlo), std::abs(mhi)) <= std::max(std::abs(glo), std::abs(ghi));
    const double a = 4 * rng.uniform() - 2, b = 4 * rng.uniform() - 2;
    const auto lhs = apply(combine(a, f, b, g));
    const auto rhs = combine(a, Mf, b, Mg);
    const auto diff = combine(1.0, lhs, -1.0, rhs);
    const auto [dlo, dhi] = range(diff);
    lin_err = std::max({lin_err, std::abs(dlo), std::abs(dhi)});
  }
  Outcome o;
  o.pass = one_err == 0.0 && positive && contracting && lin_err <= 1e-12;
  o.detail = "|M1-1|=" + fmt(one_err) + " positivity=" + (positive ? "ok" : "violated") +
             " contraction=" + (contracting ? "ok" : "violated") + " linearity=" + fmt(lin_err);
  return o;
}

}  // namespace

int main() {
  criterion(1, "1-D Takagi identity", [] {
    const Timed t = run("oracle-1d", "oracle1d.json");
    const json& r = t.result.report;
    const double err = r["takagi_sup_error"].get<double>();
    const bool ok = err <= 1e-6 && r["points"] == 4097 && r["series_depth"] == 40 && t.seconds < 10.0;
    return Outcome{ok, "sup|psi/2 - takagi|=" + fmt(err) + " over " + r["points"].dump() + " points, " +
                           fmt(t.seconds) + " s"};
  });

  criterion(2, "Lebesgue identity at a = 1/2", [] {
    double sup_id = 0.0, sup_half = 0.0;
    for (int k = 0; k <= 4096; ++k) {
      const double x = k / 4096.0;
      sup_id = std::max(sup_id, std::abs(oracle::lebesgue_singular(0.5, x, 50) - x));
    }
    RngStream rng(2);
    for (int k = 0; k < 10000; ++k) {
      const double x = rng.uniform();
      sup_id = std::max(sup_id, std::abs(oracle::lebesgue_singular(0.5, x, 50) - x));
    }
    for (int k = 1; k <= 9; ++k) {
      const double a = k / 10.0;
      sup_half = std::max(sup_half, std::abs(oracle::lebesgue_singular(a, 0.5, 50) - a));
    }
    return Outcome{sup_id <= 1e-12 && sup_half <= 1e-12,
                   "sup|L_1/2(x)-x|=" + fmt(sup_id) + " max|L_a(1/2)-a|=" + fmt(sup_half)};
  });

  criterion(3, "dc1 minimal sets, mean stability and kernel probe", [] {
    const Timed sets = run("find-minimal-sets", "dc1.json");
    const Timed stab = run("test-mean-stability", "dc1.json");
    const Timed kern = run("probe-kernel", "dc1.json");
    const json& sr = sets.result.report;
    bool zero = false, inf = false;
    for (const auto& set : sr["sets"]) {
      if (set["at_infinity"].get<bool>()) inf = true;
      else {
        const double re = set["representative"][0].get<double>(), im = set["representative"][1].get<double>();
        zero = zero || std::hypot(re, im) < 1e-6;
      }
    }
    const double total = sets.seconds + stab.seconds + kern.seconds;
    const double fraction = kern.result.report["fraction"].get<double>();
    const int depth = kern.result.report["max_depth_needed"].get<int>();
    const std::string verdict = stab.result.report["verdict"].get<std::string>();
    const bool ok = sr["count"] == 2 && zero && inf && verdict == "true" && fraction == 1.0 && depth <= 20 &&
                    total < 300.0;
    return Outcome{ok, "sets=" + sr["count"].dump() + " mean_stable=" + verdict + " kernel_fraction=" +
                           fmt(fraction) + " depth=" + std::to_string(depth) + ", " + fmt(total) + " s"};
  });

  criterion(4, "operator axioms on randomized grids", [] {
    const Scenario s = parse_scenario_file(scenario_path("dc1.json"));
    const DiscreteMeasure& mu = *s.measure;
    const RngStream root(*s.seed);
    const auto sets = find_attracting_minimal_sets(mu, s.grid, {}, root.split(1).next_u64());
    const auto basins = classify_plane_grid(mu, sets, s.grid, s.depths.classify, s.depths.words,
                                            root.split(2).next_u64());
    const TransitionOperator op(mu, basins, root.split(3).next_u64());
    auto make = [&](RngStream& rng, double lo, double hi) {
      GridFunction f = op.make_function();
      for (auto& v : f.values) v = lo + (hi - lo) * rng.uniform();
      f.value_at_infinity = lo + (hi - lo) * rng.uniform();
      return f;
    };
    auto combine = [](double a, const GridFunction& f, double b, const GridFunction& g) {
      GridFunction h = f;
      for (std::size_t k = 0; k < h.values.size(); ++k) h.values[k] = a * f.values[k] + b * g.values[k];
      h.value_at_infinity = a * f.value_at_infinity + b * g.value_at_infinity;
      return h;
    };
    auto range = [](const GridFunction& f) {
      return std::make_pair(std::min(f.min_value(), f.value_at_infinity), std::max(f.max_value(), f.value_at_infinity));
    };
    const Outcome plane = markov_axioms(
        100, 4, make, [&](const GridFunction& f) { return op.apply(f); }, combine, range);

    using F = oracle::IntervalOperator::Function;
    const oracle::IntervalOperator iop(oracle::RealAffineSystem::doubling(0.3), 4097);
    auto imake = [&](RngStream& rng, double lo, double hi) {
      F f;
      f.values.resize(static_cast<std::size_t>(iop.size()));
      for (auto& v : f.values) v = lo + (hi - lo) * rng.uniform();
      f.below = lo + (hi - lo) * rng.uniform();
      f.above = lo + (hi - lo) * rng.uniform();
      return f;
    };
    auto icombine = [](double a, const F& f, double b, const F& g) {
      F h = f;
      for (std::size_t k = 0; k < h.values.size(); ++k) h.values[k] = a * f.values[k] + b * g.values[k];
      h.below = a * f.below + b * g.below;
      h.above = a * f.above + b * g.above;
      return h;
    };
    auto irange = [](const F& f) {
      const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
      return std::make_pair(std::min({*lo, f.below, f.above}), std::max({*hi, f.below, f.above}));
    };
    const Outcome line = markov_axioms(
        100, 5, imake, [&](const F& f) { return iop.apply(f); }, icombine, irange);
    return Outcome{plane.pass && line.pass, "plane: " + plane.detail + "; interval: " + line.detail};
  });

  criterion(5, "T consistency on dc1", [] {
    const Timed t = run("solve-T", "dc1.json");
    const json& r = t.result.report;
    const json& mc = r["monte_carlo"];
    const double partition = r["partition_max_error"].get<double>();
    const double ptol = r["partition_tolerance"].get<double>();
    const bool ok = mc["pass"].get<bool>() && mc["samples"] == 10000 && mc["probes"].size() == 25 && partition <= ptol;
    return Outcome{ok, "MC worst excess over 3*stderr+0.02=" + fmt(mc["worst_excess"].get<double>()) +
                           " partition error=" + fmt(partition) + " (tol " + fmt(ptol) + ")"};
  });

  criterion(6, "complex Takagi functional equation on dc1", [] {
    const Timed t = run("takagi", "dc1.json");
    const json& r = t.result.report;
    const double residual = r["residual"].get<double>();
    const double on_sets = r["psi_at_minimal_sets_max"].get<double>();
    const double fd = r["finite_difference"]["max_deviation"].get<double>();
    const std::size_t probes = r["finite_difference"]["probes"].size();
    const bool ok = residual <= 1e-3 && on_sets <= 1e-6 && fd <= 0.01 && probes == 25;
    return Outcome{ok, "residual=" + fmt(residual) + " |psi| on sets=" + fmt(on_sets) + " FD deviation=" + fmt(fd) +
                           " at " + std::to_string(probes) + " probes"};
  });

  criterion(7, "convergence rate on dc1 and the z^2 control", [] {
    const Timed d = run("rate", "dc1.json");
    const Timed z = run("rate", "z2.json");
    const double l1 = d.result.report["lambda_hat"].get<double>(), r2 = d.result.report["r_squared"].get<double>();
    const double l2 = z.result.report["lambda_hat"].get<double>();
    const bool flag = z.result.report["hypothesis_flag"].get<bool>();
    const bool ok = l1 < 1.0 && r2 > 0.9 && d.result.report["iterations"] == 60 && l2 >= 0.98 && flag;
    return Outcome{ok, "dc1 lambda=" + fmt(l1) + " R2=" + fmt(r2) + "; z^2 lambda=" + fmt(l2) +
                           " flagged=" + (flag ? "yes" : "no")};
  });

  criterion(8, "exponents on dc1", [] {
    const Scenario s = parse_scenario_file(scenario_path("dc1.json"));
    Scenario quick = s;
    quick.holder.samples = 0;
    const CommandResult c = run_command("exponents", quick);
    const double u = c.report["u"].get<double>(), dim = c.report["dimH_lambda"].get<double>();
    const AnalysisReport forced = analytic_exponents(*s.measure, OmegaEstimate{});
    const bool ok = u < 1.0 && dim > 0.0 && dim < 2.0 && forced.u_value == 0.5;
    return Outcome{ok, "u=" + fmt(u) + " dimH=" + fmt(dim) + " u(Omega=0)=" + fmt(forced.u_value)};
  });

  criterion(9, "Hoelder exponent of T_infinity against u", [] {
    const Timed t = run("exponents", "dc1.json");
    const json& h = t.result.report["holder"];
    const double med = h["median"].get<double>(), u = t.result.report["u"].get<double>();
    const bool ok = h["samples"] == 100 && std::abs(med - u) <= 0.15;
    return Outcome{ok, "median=" + fmt(med) + " u=" + fmt(u) + " over " + h["samples"].dump() + " lambda samples"};
  });

  criterion(10, "bifurcation scan on a nested quadratic family", [] {
    const Timed t = run("scan-bifurcation", "bifurcation.json");
    const json& rows = t.result.report["rows"];
    std::string counts;
    bool nonincreasing = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      counts += (k ? "," : "") + rows[k]["count"].dump();
      if (k && rows[k]["count"].get<int>() > rows[k - 1]["count"].get<int>()) nonincreasing = false;
    }
    const bool ok = !rows.empty() && nonincreasing && rows.front()["t"] == 0.0 && rows.front()["count"] == 2 &&
                    rows.back()["t"] == 1.0 && rows.back()["count"] == 1 && t.seconds < 600.0;
    return Outcome{ok, "counts=" + counts + ", " + fmt(t.seconds) + " s"};
  });

  criterion(11, "determinism", [] {
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"oracle-1d", "oracle1d.json"},      {"find-minimal-sets", "dc1.json"}, {"classify-basins", "dc1.json"},
        {"solve-T", "dc1.json"},             {"render-julia", "dc1.json"},      {"rate", "z2.json"},
        {"scan-bifurcation", "bifurcation.json"}};
    std::size_t files = 0;
    std::string mismatch;
    for (const auto& [cmd, scen] : runs) {
      const Timed a = run(cmd, scen), b = run(cmd, scen);
      if (a.result.artifacts.size() != b.result.artifacts.size()) mismatch += cmd + " ";
      for (std::size_t k = 0; k < std::min(a.result.artifacts.size(), b.result.artifacts.size()); ++k) {
        ++files;
        if (a.result.artifacts[k].name != b.result.artifacts[k].name ||
            a.result.artifacts[k].bytes != b.result.artifacts[k].bytes)
          mismatch += cmd + "/" + a.result.artifacts[k].name + " ";
      }
    }
    return Outcome{mismatch.empty(), std::to_string(files) + " artifacts compared" +
                                         (mismatch.empty() ? "" : ", differing: " + mismatch)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
