#include "coopdyn/coopdyn.h"

#include <exception>
#include <new>
#include <string>

#include "coopdyn/commands.hpp"
#include "coopdyn/error.hpp"
#include "coopdyn/fractal_sets.hpp"
#include "coopdyn/minimal_sets.hpp"
#include "coopdyn/oracle_1d.hpp"
#include "coopdyn/scenario.hpp"
#include "coopdyn/semigroup.hpp"
#include "coopdyn/transition_operator.hpp"

struct coopdyn_measure {
  coopdyn::DiscreteMeasure measure;
};

struct coopdyn_grid_function {
  coopdyn::GridFunction f;
  double residual = 0.0;
};

namespace {

thread_local std::string last_error;

coopdyn_status to_status(coopdyn::ErrorCode c) {
  switch (c) {
    case coopdyn::ErrorCode::invalid_argument: return COOPDYN_INVALID_ARGUMENT;
    case coopdyn::ErrorCode::non_convergence: return COOPDYN_NON_CONVERGENCE;
    case coopdyn::ErrorCode::unsupported: return COOPDYN_UNSUPPORTED;
    case coopdyn::ErrorCode::io: return COOPDYN_IO;
    case coopdyn::ErrorCode::schema: return COOPDYN_SCHEMA;
    case coopdyn::ErrorCode::overflow: return COOPDYN_OVERFLOW;
  }
  return COOPDYN_INTERNAL;
}

template <class F>
coopdyn_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return COOPDYN_OK;
  } catch (const coopdyn::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return COOPDYN_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return COOPDYN_INTERNAL;
  }
}

coopdyn::SpherePoint from_c(coopdyn_point p) {
  return p.is_infinity ? coopdyn::SpherePoint::infinity() : coopdyn::SpherePoint(coopdyn::Complex(p.re, p.im));
}

coopdyn_point to_c(const coopdyn::SpherePoint& p) {
  if (p.is_infinity()) return {0.0, 0.0, 1};
  return {p.value().real(), p.value().imag(), 0};
}

void need(const void* p, const char* what) {
  if (!p) coopdyn::fail(coopdyn::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

}  // namespace

extern "C" {

const char* coopdyn_version(void) { return COOPDYN_VERSION_STRING; }

const char* coopdyn_last_error(void) { return last_error.c_str(); }

coopdyn_status coopdyn_measure_create(size_t n_maps, const double* num, const size_t* num_offsets, const double* den,
                                      const size_t* den_offsets, const double* weights, coopdyn_measure** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    need(num, "num");
    need(num_offsets, "num_offsets");
    need(weights, "weights");
    std::vector<coopdyn::RationalMap> maps;
    for (size_t k = 0; k < n_maps; ++k) {
      coopdyn::Polynomial p, q;
      for (size_t c = num_offsets[k]; c < num_offsets[k + 1]; ++c) p.emplace_back(num[2 * c], num[2 * c + 1]);
      if (den && den_offsets)
        for (size_t c = den_offsets[k]; c < den_offsets[k + 1]; ++c) q.emplace_back(den[2 * c], den[2 * c + 1]);
      if (q.empty()) q.emplace_back(1.0);
      maps.emplace_back(std::move(p), std::move(q));
    }
    auto m = coopdyn::build_semigroup(std::move(maps), std::vector<double>(weights, weights + n_maps));
    *out = new coopdyn_measure{std::move(m)};
  });
}

coopdyn_status coopdyn_measure_from_json(const char* json, coopdyn_measure** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    need(json, "json");
    coopdyn::io::json doc;
    try {
      doc = coopdyn::io::json::parse(json);
    } catch (const std::exception& e) {
      coopdyn::fail(coopdyn::ErrorCode::schema, std::string("malformed JSON: ") + e.what());
    }
    coopdyn::Scenario s = coopdyn::parse_scenario(doc);
    if (!s.measure) coopdyn::fail(coopdyn::ErrorCode::schema, "scenario: field 'maps': missing");
    *out = new coopdyn_measure{std::move(*s.measure)};
  });
}

void coopdyn_measure_destroy(coopdyn_measure* m) { delete m; }

size_t coopdyn_measure_size(const coopdyn_measure* m) { return m ? m->measure.size() : 0; }

coopdyn_status coopdyn_measure_escape_radius(const coopdyn_measure* m, double* out) {
  return guarded([&] {
    need(m, "measure");
    need(out, "out");
    if (!m->measure.system.escape_radius)
      coopdyn::fail(coopdyn::ErrorCode::unsupported, "escape radius: the system is not all polynomial");
    *out = *m->measure.system.escape_radius;
  });
}

coopdyn_status coopdyn_measure_eval(const coopdyn_measure* m, size_t generator, coopdyn_point z, coopdyn_point* out) {
  return guarded([&] {
    need(m, "measure");
    need(out, "out");
    coopdyn::require(generator < m->measure.size(), "eval: generator index out of range");
    *out = to_c(m->measure.system[generator](from_c(z)));
  });
}

double coopdyn_chordal_distance(coopdyn_point p, coopdyn_point q) {
  return coopdyn::chordal_distance(from_c(p), from_c(q));
}

coopdyn_status coopdyn_estimate_T_infinity(const coopdyn_measure* m, coopdyn_point z, size_t n_samples,
                                           size_t n_steps, uint64_t seed, double* estimate, double* std_error) {
  return guarded([&] {
    need(m, "measure");
    need(estimate, "estimate");
    if (!m->measure.system.all_polynomial)
      coopdyn::fail(coopdyn::ErrorCode::unsupported, "T_infinity: the system is not all polynomial");
    const std::vector<coopdyn::MinimalSetEstimate> sets{coopdyn::MinimalSetEstimate::infinity()};
    coopdyn::MonteCarloOptions o;
    o.n_samples = n_samples;
    o.n_steps = n_steps;
    o.capture_dist = 1e-6;
    const auto e = coopdyn::estimate_T_monte_carlo(m->measure, sets, 0, from_c(z), o, seed);
    *estimate = e.estimate;
    if (std_error) *std_error = e.stderr_;
  });
}

coopdyn_status coopdyn_solve_T_infinity(const coopdyn_measure* m, coopdyn_grid grid, int classify_depth,
                                        int classify_words, double tol, int max_iter, uint64_t seed,
                                        coopdyn_grid_function** out) {
  return guarded([&] {
    need(m, "measure");
    need(out, "out");
    *out = nullptr;
    if (!m->measure.system.all_polynomial)
      coopdyn::fail(coopdyn::ErrorCode::unsupported, "T_infinity: the system is not all polynomial");
    coopdyn::GridGeometry g;
    g.center = {grid.center_re, grid.center_im};
    g.half_width = grid.half_width;
    g.resolution = grid.resolution;
    g.validate();
    const coopdyn::RngStream root(seed);
    const auto sets = coopdyn::find_attracting_minimal_sets(m->measure, g, {}, root.split(1).next_u64());
    const auto basins =
        coopdyn::classify_plane_grid(m->measure, sets, g, classify_depth, classify_words, root.split(2).next_u64());
    const coopdyn::TransitionOperator op(m->measure, basins, root.split(3).next_u64());
    coopdyn::SolveOptions so;
    so.tol = tol;
    so.max_iter = max_iter;
    auto r = coopdyn::solve_T_fixed_point(op, sets.size() - 1, so);
    *out = new coopdyn_grid_function{std::move(r.T), r.residual};
  });
}

void coopdyn_grid_function_destroy(coopdyn_grid_function* f) { delete f; }

coopdyn_grid coopdyn_grid_function_geometry(const coopdyn_grid_function* f) {
  if (!f) return {0.0, 0.0, 0.0, 0};
  const auto& g = f->f.geometry;
  return {g.center.real(), g.center.imag(), g.half_width, g.resolution};
}

const double* coopdyn_grid_function_values(const coopdyn_grid_function* f) { return f ? f->f.values.data() : nullptr; }

double coopdyn_grid_function_sample(const coopdyn_grid_function* f, coopdyn_point z) {
  return f ? f->f.sample(from_c(z)) : 0.0;
}

double coopdyn_grid_function_residual(const coopdyn_grid_function* f) { return f ? f->residual : 0.0; }

coopdyn_status coopdyn_lebesgue_singular(double a, double x, int depth, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = coopdyn::oracle::lebesgue_singular(a, x, depth);
  });
}

double coopdyn_takagi_classic(double x, int n_terms) {
  return n_terms >= 1 ? coopdyn::oracle::takagi_classic(x, n_terms) : 0.0;
}

coopdyn_status coopdyn_devils_staircase(double x, int depth, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = coopdyn::oracle::devils_staircase(x, depth);
  });
}

coopdyn_status coopdyn_run_command(const char* name, const char* scenario_path, const char* out_dir, int has_seed,
                                   uint64_t seed, int* exit_code) {
  std::string err;
  const coopdyn_status st = guarded([&] {
    need(name, "name");
    need(scenario_path, "scenario_path");
    need(out_dir, "out_dir");
    need(exit_code, "exit_code");
    std::optional<std::uint64_t> s;
    if (has_seed) s = seed;
    *exit_code = coopdyn::run_command_to_directory(name, scenario_path, out_dir, s, &err);
  });
  if (st == COOPDYN_OK && *exit_code == coopdyn::kExitError) last_error = err;
  return st;
}

const char* const* coopdyn_command_names(void) {
  static const std::vector<const char*> names = [] {
    std::vector<const char*> v;
    for (const auto& n : coopdyn::command_names()) v.push_back(n.c_str());
    v.push_back(nullptr);
    return v;
  }();
  return names.data();
}

}  // extern "C"
