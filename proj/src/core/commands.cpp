#include "coopdyn/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coopdyn/error.hpp"
#include "coopdyn/fractal_sets.hpp"
#include "coopdyn/minimal_sets.hpp"
#include "coopdyn/oracle_1d.hpp"
#include "coopdyn/takagi.hpp"
#include "coopdyn/transition_operator.hpp"

namespace coopdyn {

namespace {

using io::json;

const DiscreteMeasure& need_measure(const Scenario& s, const std::string& command) {
  if (!s.measure) fail(ErrorCode::schema, "scenario: field 'maps': required by command '" + command + "'");
  return *s.measure;
}

// Sub-seeds are fixed functions of the scenario seed and a stage number.
std::uint64_t stage_seed(const Scenario& s, std::uint64_t stage) { return RngStream(*s.seed).split(stage).next_u64(); }

double capture_tol(const Scenario& s) {
  return s.tolerances.capture > 0.0 ? s.tolerances.capture : s.grid.capture_tolerance();
}

MinimalSetOptions discovery_options(const Scenario& s) {
  MinimalSetOptions o;
  o.search_depth = s.depths.search;
  o.capture_tolerance = s.tolerances.capture;
  return o;
}

MeanStabilityOptions stability_options(const Scenario& s) {
  MeanStabilityOptions o;
  o.discovery = discovery_options(s);
  o.classify.capture_tolerance = s.tolerances.capture;
  o.julia_points = static_cast<std::size_t>(s.depths.julia_points);
  o.coverage_depth = s.depths.coverage;
  o.coverage_resolution = s.depths.coverage_resolution;
  return o;
}

json set_json(const MinimalSetEstimate& set, std::size_t index) {
  json j = {{"index", index},
            {"at_infinity", set.at_infinity},
            {"points", set.at_infinity ? 1 : set.cloud.size()},
            {"representative", io::to_json(set.representative())},
            {"classification", to_string(set.classification)},
            {"period", set.period}};
  if (!set.at_infinity) j["seed_multiplier"] = set.seed_multiplier;
  if (!set.diagnostic.empty()) j["diagnostic"] = set.diagnostic;
  return j;
}

json sets_json(const std::vector<MinimalSetEstimate>& sets) {
  json arr = json::array();
  for (std::size_t k = 0; k < sets.size(); ++k) arr.push_back(set_json(sets[k], k));
  return arr;
}

std::string set_stem(const MinimalSetEstimate& set, std::size_t k) {
  return set.at_infinity ? std::string("infinity") : "set" + std::to_string(k);
}

// Attracting sets, basin labels and the operator on the scenario grid.
struct Pipeline {
  DiscreteMeasure measure;
  std::vector<MinimalSetEstimate> sets;
  BasinLabelGrid basins;
  TransitionOperator op;
};

Pipeline build_pipeline(const Scenario& s, const std::string& command) {
  const DiscreteMeasure& mu = need_measure(s, command);
  auto sets = find_attracting_minimal_sets(mu, s.grid, discovery_options(s), stage_seed(s, 1));
  BasinLabelGrid basins =
      classify_plane_grid(mu, sets, s.grid, s.depths.classify, s.depths.words, stage_seed(s, 2), s.tolerances.capture);
  TransitionOperator op(mu, basins, stage_seed(s, 3));
  return {mu, std::move(sets), std::move(basins), std::move(op)};
}

std::size_t default_target(const Pipeline& p) {
  for (std::size_t k = 0; k < p.sets.size(); ++k)
    if (p.sets[k].at_infinity) return k;
  return 0;
}

SolveOptions solve_options(const Scenario& s) {
  SolveOptions o;
  o.tol = s.tolerances.solve;
  o.max_iter = s.depths.max_iter;
  return o;
}

json solve_json(const FixedPointResult& r, double tol) {
  return {{"residual", r.residual}, {"tolerance", tol}, {"iterations", r.iterations},
          {"min", r.min_value},     {"max", r.max_value}};
}

// Nodes with a decided label and no extrapolated image, sampled without
// replacement.
std::vector<SpherePoint> basin_probes(const Pipeline& p, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> good;
  for (std::size_t c = 0; c < p.basins.labels.size(); ++c)
    if (p.basins.labels[c] >= 0 && !p.op.extrapolated()[c]) good.push_back(c);
  RngStream rng(seed);
  std::vector<SpherePoint> out;
  for (std::size_t k = 0; k < count && k < good.size(); ++k) {
    std::swap(good[k], good[k + rng.below(good.size() - k)]);
    out.emplace_back(p.basins.geometry.node(good[k]));
  }
  return out;
}

json points_json(const std::vector<SpherePoint>& pts) {
  json arr = json::array();
  for (const auto& z : pts) arr.push_back(io::to_json(z));
  return arr;
}

GridFunction rate_observable(const Scenario& s, const TransitionOperator& op) {
  GridFunction phi = op.make_function();
  const GridGeometry& g = op.geometry();
  if (s.rate.observable == "circle_indicator") {
    // Unit circle about the grid centre, cosine taper over five cells.
    const double w = 5.0 * g.step();
    for (std::size_t c = 0; c < g.cells(); ++c) {
      const double d = std::abs(std::abs(g.node(c) - g.center) - 1.0);
      phi.values[c] = d < w ? 0.5 * (1.0 + std::cos(3.141592653589793 * d / w)) : 0.0;
    }
    phi.value_at_infinity = 0.0;
  } else {
    // Sum of four low-frequency cosines with seeded coefficients.
    RngStream rng(stage_seed(s, 40));
    double amp[4], fx[4], fy[4], ph[4];
    for (int k = 0; k < 4; ++k) {
      amp[k] = rng.uniform() - 0.5;
      fx[k] = (2.0 * rng.uniform() - 1.0) * 2.0 / g.half_width;
      fy[k] = (2.0 * rng.uniform() - 1.0) * 2.0 / g.half_width;
      ph[k] = 6.283185307179586 * rng.uniform();
    }
    for (std::size_t c = 0; c < g.cells(); ++c) {
      const Complex z = g.node(c) - g.center;
      double v = 0.0;
      for (int k = 0; k < 4; ++k) v += amp[k] * std::cos(fx[k] * z.real() + fy[k] * z.imag() + ph[k]);
      phi.values[c] = v;
    }
    phi.value_at_infinity = rng.uniform();
  }
  phi.name = s.rate.observable;
  return phi;
}

json rate_json(const RateReport& r) {
  return {{"lambda_hat", r.lambda_hat},
          {"r_squared", r.r_squared},
          {"below_noise_floor", r.below_noise_floor},
          {"hypothesis_flag", r.hypothesis_flag},
          {"hypothesis_flag_threshold", 0.98},
          {"burn_in", r.burn_in},
          {"fit_points", r.fit_points},
          {"increments", r.increments}};
}

// ------------------------------------------------------------------ commands

CommandResult cmd_render_julia(const Scenario& s) {
  const DiscreteMeasure& mu = need_measure(s, "render-julia");
  const PointCloud cloud =
      julia_backward_cloud(mu, static_cast<std::size_t>(s.depths.julia_points), 100, stage_seed(s, 10));
  const HyperbolicityReport h = hyperbolicity_probe(mu, cloud, s.depths.orbit, s.depths.words, stage_seed(s, 11));
  std::vector<std::uint8_t> mask(s.grid.cells(), 0);
  for (const auto& p : cloud.points) {
    if (!p.is_finite() || !s.grid.contains(p.value())) continue;
    double x, y;
    s.grid.to_grid(p.value(), x, y);
    mask[s.grid.index(static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y)))] = 1;
  }
  CommandResult r;
  r.report = {{"points", cloud.size()},
              {"cloud_resolution", cloud_resolution(cloud)},
              {"hyperbolicity",
               {{"min_postcritical_distance", h.min_distance},
                {"tolerance", 2.0 * h.resolution},
                {"postcritical_samples", h.postcritical_samples},
                {"verdict", h.hyperbolic_consistent}}}};
  r.artifacts.push_back({"julia.csv", io::cloud_csv(cloud)});
  r.artifacts.push_back(io::mask_pgm(mask, s.grid, "julia.pgm"));
  return r;
}

CommandResult cmd_classify_basins(const Scenario& s) {
  const DiscreteMeasure& mu = need_measure(s, "classify-basins");
  const auto sets = find_attracting_minimal_sets(mu, s.grid, discovery_options(s), stage_seed(s, 1));
  const BasinLabelGrid b =
      classify_plane_grid(mu, sets, s.grid, s.depths.classify, s.depths.words, stage_seed(s, 2), s.tolerances.capture);
  CommandResult r;
  json counts = json::array();
  for (std::size_t k = 0; k < sets.size(); ++k)
    counts.push_back(std::count(b.labels.begin(), b.labels.end(), static_cast<std::int32_t>(k)));
  r.report = {{"sets", sets_json(sets)},
              {"label_counts", counts},
              {"undecided", b.undecided_count()},
              {"undecided_fraction", b.undecided_fraction()},
              {"depth", b.depth},
              {"n_words", b.n_words},
              {"capture_tolerance", b.capture_tolerance}};
  for (auto& a : io::labels_pgm(b, "basins")) r.artifacts.push_back(std::move(a));
  return r;
}

CommandResult cmd_find_minimal_sets(const Scenario& s) {
  const DiscreteMeasure& mu = need_measure(s, "find-minimal-sets");
  auto sets = discover_minimal_sets(mu, s.grid, discovery_options(s), stage_seed(s, 1));
  PointCloud julia;
  bool have_julia = true;
  try {
    julia = julia_backward_cloud(mu, static_cast<std::size_t>(s.depths.julia_points), 100, stage_seed(s, 10));
  } catch (const Error&) {
    have_julia = false;
  }
  ClassifyOptions co;
  co.capture_tolerance = s.tolerances.capture;
  CommandResult r;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (have_julia)
      sets[k].classification = classify_minimal_set(mu, sets[k], julia, s.grid, co, stage_seed(s, 100 + k));
    if (!sets[k].at_infinity) r.artifacts.push_back({"set" + std::to_string(k) + ".csv", io::cloud_csv(sets[k].cloud)});
  }
  r.report = {{"count", sets.size()}, {"capture_tolerance", capture_tol(s)}, {"sets", sets_json(sets)}};
  if (!have_julia) r.report["diagnostic"] = "no repelling fixed point; classification skipped";
  return r;
}

CommandResult cmd_test_mean_stability(const Scenario& s) {
  const DiscreteMeasure& mu = need_measure(s, "test-mean-stability");
  const MeanStabilityResult m = test_mean_stability(mu, s.grid, stability_options(s), stage_seed(s, 20));
  CommandResult r;
  r.report = {{"verdict", to_string(m.verdict)},
              {"verdict_kind", "numerical"},
              {"capture_tolerance", capture_tol(s)},
              {"sets", sets_json(m.sets)},
              {"counterexample", m.counterexample},
              {"uncovered_cells", m.uncovered_cells},
              {"witness_n", m.witness.n},
              {"coverage_depth", m.witness.coverage_depth},
              {"coverage_depth_cap", s.depths.coverage}};
  if (!m.diagnostic.empty()) r.report["diagnostic"] = m.diagnostic;
  if (!m.witness.U.empty()) {
    r.artifacts.push_back(io::mask_pgm(m.witness.U, s.grid, "witness_U.pgm"));
    r.artifacts.push_back(io::mask_pgm(m.witness.V, s.grid, "witness_V.pgm"));
  }
  if (m.verdict == Verdict::inconclusive) r.exit_code = kExitInconclusive;
  return r;
}

CommandResult cmd_solve_T(const Scenario& s) {
  const Pipeline p = build_pipeline(s, "solve-T");
  const SolveOptions so = solve_options(s);
  CommandResult r;
  json solves = json::array();
  std::vector<GridFunction> Ts;
  for (std::size_t k = 0; k < p.sets.size(); ++k) {
    FixedPointResult f = solve_T_fixed_point(p.op, k, so);
    f.T.name = "T_" + set_stem(p.sets[k], k);
    json j = solve_json(f, so.tol);
    j["set"] = k;
    solves.push_back(j);
    for (auto& a : io::grid_function_pgm(f.T, f.T.name)) r.artifacts.push_back(std::move(a));
    Ts.push_back(std::move(f.T));
  }
  // Partition of unity over non-extrapolated nodes.
  double partition = 0.0;
  for (std::size_t c = 0; c < p.basins.geometry.cells(); ++c) {
    if (p.op.extrapolated()[c]) continue;
    double sum = 0.0;
    for (const auto& T : Ts) sum += T.values[c];
    partition = std::max(partition, std::abs(sum - 1.0));
  }
  // Monte Carlo cross-check of the target set at seeded probes. Probes are
  // drawn from nodes where T is strictly between 0 and 1 when there are any.
  const std::size_t target = default_target(p);
  RngStream prng(stage_seed(s, 30));
  MonteCarloOptions mo;
  mo.n_samples = static_cast<std::size_t>(s.depths.mc_samples);
  mo.n_steps = static_cast<std::size_t>(s.depths.mc_steps);
  mo.capture_dist = capture_tol(s);
  json probes = json::array();
  double mc_worst = -1e300;
  const GridGeometry& g = p.basins.geometry;
  std::vector<std::size_t> interior;
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const double v = Ts[target].values[c];
    if (!p.op.extrapolated()[c] && v > 1e-3 && v < 1.0 - 1e-3) interior.push_back(c);
  }
  for (int k = 0; k < 25; ++k) {
    const std::size_t c = interior.empty() ? prng.below(g.cells()) : interior[prng.below(interior.size())];
    const SpherePoint z(g.node(c));
    const MonteCarloEstimate e = estimate_T_monte_carlo(p.measure, p.sets, target, z, mo, stage_seed(s, 31 + k));
    const double grid_value = Ts[target].sample(z);
    const double slack = std::abs(grid_value - e.estimate) - (3.0 * e.stderr_ + 0.02);
    mc_worst = std::max(mc_worst, slack);
    probes.push_back({{"z", io::to_json(z)},
                      {"grid", grid_value},
                      {"monte_carlo", e.estimate},
                      {"stderr", e.stderr_},
                      {"undecided", e.undecided}});
  }
  r.report = {{"target_set", target},
              {"residual", solves[target]["residual"]},
              {"tolerance", so.tol},
              {"sets", sets_json(p.sets)},
              {"solves", solves},
              {"extrapolated_cells", p.op.extrapolated_count()},
              {"partition_max_error", partition},
              {"partition_tolerance", 0.01 + 2.0 * so.tol},
              {"monte_carlo",
               {{"samples", mo.n_samples},
                {"steps", mo.n_steps},
                {"capture_dist", mo.capture_dist},
                {"tolerance", "3*stderr + 0.02"},
                {"worst_excess", mc_worst},
                {"pass", mc_worst <= 0.0},
                {"probes", probes}}}};
  return r;
}

CommandResult cmd_takagi(const Scenario& s) {
  const Pipeline p = build_pipeline(s, "takagi");
  const std::size_t m = p.measure.size();
  if (m < 2) fail(ErrorCode::invalid_argument, "takagi: at least two generators required");
  const auto i = static_cast<std::size_t>(s.takagi.generator);
  if (i + 1 >= m) fail(ErrorCode::schema, "scenario: field 'takagi.generator': must be below the last generator");
  const std::size_t target = default_target(p);
  const SolveOptions so = solve_options(s);
  const FixedPointResult T = solve_T_fixed_point(p.op, target, so);
  const RateReport rate = estimate_convergence_rate(p.op, rate_observable(s, p.op), s.depths.rate_iters);
  GridFunction zeta = zeta_field(p.op, T.T, i);
  zeta.name = "zeta";
  TakagiResult tk = takagi_series(p.op, zeta, rate.lambda_hat, s.tolerances.series, s.depths.max_iter);
  tk.psi.name = "psi";
  const auto probes = basin_probes(p, static_cast<std::size_t>(s.takagi.probes), stage_seed(s, 50));
  FiniteDifferenceReport fd;
  if (!probes.empty()) fd = finite_difference_check(p.op, target, i, s.takagi.fd_delta, probes, tk.psi, so);
  double psi_on_sets = 0.0;
  json at_sets = json::array();
  for (const auto& set : p.sets) {
    const double v = std::abs(tk.psi.sample(set.representative()));
    psi_on_sets = std::max(psi_on_sets, v);
    at_sets.push_back({{"z", io::to_json(set.representative())}, {"psi", tk.psi.sample(set.representative())}});
  }
  CommandResult r;
  r.report = {{"generator", i},
              {"target_set", target},
              {"residual", tk.residual},
              {"terms", tk.terms},
              {"tail_bound", tk.tail_bound},
              {"series_tolerance", s.tolerances.series},
              {"converged", tk.converged},
              {"lambda_hat", rate.lambda_hat},
              {"T_residual", T.residual},
              {"psi_at_minimal_sets", at_sets},
              {"psi_at_minimal_sets_max", psi_on_sets},
              {"psi_sup", tk.psi.sup_norm()},
              {"finite_difference",
               {{"delta", s.takagi.fd_delta},
                {"probes", points_json(probes)},
                {"finite_difference", fd.finite_difference},
                {"series", fd.series},
                {"max_deviation", fd.max_deviation}}}};
  for (auto& a : io::grid_function_pgm(tk.psi, "psi")) r.artifacts.push_back(std::move(a));
  for (auto& a : io::grid_function_pgm(zeta, "zeta")) r.artifacts.push_back(std::move(a));
  return r;
}

CommandResult cmd_rate(const Scenario& s) {
  const Pipeline p = build_pipeline(s, "rate");
  const GridFunction phi = rate_observable(s, p.op);
  const RateReport rate = estimate_convergence_rate(p.op, phi, s.depths.rate_iters);
  CommandResult r;
  r.report = rate_json(rate);
  r.report["observable"] = s.rate.observable;
  r.report["iterations"] = s.depths.rate_iters;
  r.report["sets"] = sets_json(p.sets);
  return r;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

CommandResult cmd_exponents(const Scenario& s) {
  const DiscreteMeasure& mu = need_measure(s, "exponents");
  const OmegaEstimate omega = omega_integral_mc(mu, static_cast<std::size_t>(s.depths.omega_words),
                                                static_cast<std::size_t>(s.depths.omega_length), stage_seed(s, 60));
  const AnalysisReport a = analytic_exponents(mu, omega);
  CommandResult r;
  r.report = {{"u", a.u_value},
              {"u_stderr", a.u_stderr},
              {"dimH_lambda", a.dimH_lambda},
              {"dimH_stderr", a.dimH_stderr},
              {"omega_integral", a.omega_integral},
              {"omega_stderr", a.omega_stderr},
              {"omega_words", omega.n_words},
              {"entropy_term", a.entropy_term},
              {"degree_term", a.degree_term},
              {"u_below_one", a.u_value < 1.0},
              {"dimH_in_open_interval", a.dimH_lambda > 0.0 && a.dimH_lambda < 2.0}};
  if (s.holder.samples > 0) {
    const Pipeline p = build_pipeline(s, "exponents");
    const std::size_t target = default_target(p);
    const FixedPointResult T = solve_T_fixed_point(p.op, target, solve_options(s));
    const double step = p.basins.geometry.step();
    const double r_min = s.holder.r_min_cells * step, r_max = s.holder.r_max_cells * step;
    const auto want = static_cast<std::size_t>(s.holder.samples);
    const PointCloud lambda = sample_lambda(mu, 20 * want, 100, stage_seed(s, 61));
    std::vector<double> exps;
    json pts = json::array();
    std::size_t rejected = 0;
    for (const auto& z : lambda.points) {
      if (exps.size() == want) break;
      if (!z.is_finite()) {
        ++rejected;
        continue;
      }
      try {
        const HolderEstimate h = holder_exponent_estimate(T.T, z, r_min, r_max);
        exps.push_back(h.exponent);
        pts.push_back({{"z", io::to_json(z)}, {"exponent", h.exponent}});
      } catch (const Error&) {
        ++rejected;
      }
    }
    const double med = median(exps);
    r.report["holder"] = {{"samples", exps.size()},
                          {"rejected", rejected},
                          {"r_min", r_min},
                          {"r_max", r_max},
                          {"median", med},
                          {"tolerance", 0.15},
                          {"within_tolerance_of_u", std::abs(med - a.u_value) <= 0.15},
                          {"points", pts}};
  }
  return r;
}

CommandResult cmd_scan_bifurcation(const Scenario& s) {
  if (s.family.empty()) fail(ErrorCode::schema, "scenario: field 'family': required by command 'scan-bifurcation'");
  std::vector<FamilyMember> fam;
  for (const auto& f : s.family) fam.push_back({f.t, f.measure});
  BifurcationOptions bo;
  bo.stability = stability_options(s);
  bo.classify_depth = s.depths.classify;
  bo.classify_words = s.depths.words;
  bo.nested = s.nested;
  const auto rows = scan_family_bifurcation(fam, s.grid, bo, stage_seed(s, 70));
  std::string csv = "t,count,verdict,undecided_fraction\n";
  json arr = json::array();
  bool monotone = true;
  for (const auto& row : rows) {
    csv += io::format_double(row.t) + "," + std::to_string(row.count) + "," + to_string(row.verdict) + "," +
           io::format_double(row.undecided_fraction) + "\n";
    arr.push_back({{"t", row.t},
                   {"count", row.count},
                   {"verdict", to_string(row.verdict)},
                   {"verdict_kind", "numerical"},
                   {"undecided_fraction", row.undecided_fraction},
                   {"monotonicity_warning", row.monotonicity_warning}});
    monotone = monotone && !row.monotonicity_warning;
  }
  CommandResult r;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (!rows[k].witness_U.empty())
      r.artifacts.push_back(io::mask_pgm(rows[k].witness_U, s.grid, "witness_U_" + std::to_string(k) + ".pgm"));
  r.report = {{"nested", s.nested}, {"capture_tolerance", capture_tol(s)}, {"rows", arr}};
  if (s.nested) r.report["counts_nonincreasing"] = monotone;
  r.artifacts.push_back({"scan.csv", csv});
  return r;
}

CommandResult cmd_oracle_1d(const Scenario& s) {
  const OracleOptions& o = s.oracle;
  const int n = o.points;
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) xs[static_cast<std::size_t>(k)] = static_cast<double>(k) / (n - 1);
  const auto psi = oracle::parameter_derivative_series(oracle::RealAffineSystem::doubling(0.5), xs, o.series_depth,
                                                       o.recursion_depth);
  std::string stair = "x,value\n", leb = "x,value\n", tak = "x,value,half_psi_series\n";
  double takagi_gap = 0.0, lebesgue_gap = 0.0;
  const auto sys = oracle::RealAffineSystem::doubling(o.a);
  for (int k = 0; k < n; ++k) {
    const double x = xs[static_cast<std::size_t>(k)];
    const double c = oracle::devils_staircase(x, o.recursion_depth);
    const double l = oracle::lebesgue_singular(o.a, x, o.recursion_depth);
    const double t = oracle::takagi_classic(x, 60);
    const double hp = 0.5 * psi[static_cast<std::size_t>(k)];
    takagi_gap = std::max(takagi_gap, std::abs(hp - t));
    lebesgue_gap = std::max(lebesgue_gap, std::abs(oracle::real_random_T_exact(sys, x, o.recursion_depth) - l));
    const std::string xv = io::format_double(x);
    stair += xv + "," + io::format_double(c) + "\n";
    leb += xv + "," + io::format_double(l) + "\n";
    tak += xv + "," + io::format_double(t) + "," + io::format_double(hp) + "\n";
  }
  CommandResult r;
  r.report = {{"points", n},
              {"a", o.a},
              {"series_depth", o.series_depth},
              {"recursion_depth", o.recursion_depth},
              {"takagi_sup_error", takagi_gap},
              {"takagi_tolerance", 1e-6},
              {"lebesgue_vs_random_T_sup_error", lebesgue_gap},
              {"lebesgue_tolerance", 1e-10}};
  r.artifacts.push_back({"devils_staircase.csv", stair});
  r.artifacts.push_back({"lebesgue.csv", leb});
  r.artifacts.push_back({"takagi.csv", tak});
  return r;
}

CommandResult cmd_probe_kernel(const Scenario& s) {
  const Pipeline p = build_pipeline(s, "probe-kernel");
  const PointCloud cloud =
      julia_backward_cloud(p.measure, static_cast<std::size_t>(s.depths.julia_points), 100, stage_seed(s, 10));
  const KernelProbeReport k =
      kernel_julia_probe(p.measure, cloud, p.basins, s.depths.kernel, static_cast<std::size_t>(s.depths.kernel_probes),
                         static_cast<std::size_t>(s.depths.kernel_branch_cap), stage_seed(s, 80));
  CommandResult r;
  r.report = {{"probed", k.probed},
              {"escorted", k.escorted},
              {"fraction", k.fraction},
              {"word_depth", k.word_depth},
              {"max_depth_needed", k.max_depth_needed},
              {"verdict", k.consistent_with_empty_kernel},
              {"tolerance", "fraction == 1"}};
  if (!k.consistent_with_empty_kernel) r.exit_code = kExitInconclusive;
  return r;
}

using Handler = CommandResult (*)(const Scenario&);

const std::vector<std::pair<std::string, Handler>>& table() {
  static const std::vector<std::pair<std::string, Handler>> t = {
      {"render-julia", cmd_render_julia},
      {"classify-basins", cmd_classify_basins},
      {"find-minimal-sets", cmd_find_minimal_sets},
      {"test-mean-stability", cmd_test_mean_stability},
      {"solve-T", cmd_solve_T},
      {"takagi", cmd_takagi},
      {"rate", cmd_rate},
      {"exponents", cmd_exponents},
      {"scan-bifurcation", cmd_scan_bifurcation},
      {"oracle-1d", cmd_oracle_1d},
      {"probe-kernel", cmd_probe_kernel},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, h] : table()) n.push_back(k);
    return n;
  }();
  return names;
}

bool is_command(const std::string& name) {
  const auto& n = command_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

bool command_needs_seed(const std::string& name) { return name != "oracle-1d"; }

CommandResult run_command(const std::string& name, const Scenario& scenario) {
  const auto& t = table();
  const auto it = std::find_if(t.begin(), t.end(), [&](const auto& e) { return e.first == name; });
  if (it == t.end()) fail(ErrorCode::invalid_argument, "unknown command '" + name + "'");
  if (command_needs_seed(name) && !scenario.seed)
    fail(ErrorCode::schema, "scenario: field 'seed': required by stochastic command '" + name + "'");
  CommandResult r = it->second(scenario);
  json head = {{"command", name}, {"scenario", scenario.name}};
  if (scenario.seed) head["seed"] = *scenario.seed;
  head["exit_code"] = r.exit_code;
  for (auto& [k, v] : r.report.items()) head[k] = v;
  r.report = std::move(head);
  r.artifacts.push_back({"report.json", io::dump_json(r.report)});
  return r;
}

int run_command_to_directory(const std::string& name, const std::string& scenario_path, const std::string& out_dir,
                             const std::optional<std::uint64_t>& seed_override, std::string* error) {
  try {
    Scenario s = parse_scenario_file(scenario_path);
    if (seed_override) {
      s.seed = seed_override;
      s.echo["seed"] = *seed_override;
    }
    if (!is_command(name)) fail(ErrorCode::invalid_argument, "unknown command '" + name + "'");
    const CommandResult r = run_command(name, s);
    io::emit_outputs(r.artifacts, out_dir, s.echo, name);
    return r.exit_code;
  } catch (const std::exception& e) {
    if (error) *error = e.what();
    return kExitError;
  }
}

}  // namespace coopdyn
