#include "coopdyn/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "coopdyn/error.hpp"

namespace coopdyn {

namespace {

using io::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::schema, "scenario: field '" + path + "': " + what);
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) schema_error(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    if (!keys.count(k)) schema_error(path.empty() ? k : path + "." + k, "unknown key");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "must be finite");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = get_number(j, path);
  if (!(v > 0.0)) schema_error(path, "must be positive");
  return v;
}

double nonnegative(const json& j, const std::string& path) {
  const double v = get_number(j, path);
  if (v < 0.0) schema_error(path, "must be nonnegative");
  return v;
}

int get_int(const json& j, const std::string& path, int min_value) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min_value || v > 1'000'000'000) schema_error(path, "must be at least " + std::to_string(min_value));
  return static_cast<int>(v);
}

template <class F>
void optional_field(const json& obj, const char* key, F&& f) {
  if (obj.contains(key)) f(obj.at(key));
}

Polynomial parse_coefficients(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a nonempty list of [re, im] pairs");
  Polynomial p;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string kp = path + "[" + std::to_string(k) + "]";
    const json& c = j[k];
    if (c.is_number()) {
      p.emplace_back(get_number(c, kp), 0.0);
      continue;
    }
    if (!c.is_array() || c.size() != 2) schema_error(kp, "expected [re, im]");
    p.emplace_back(get_number(c[0], kp + "[0]"), get_number(c[1], kp + "[1]"));
  }
  return p;
}

std::vector<double> parse_weights(const json& j, const std::string& path, std::size_t expected) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a nonempty list of numbers");
  std::vector<double> w;
  double sum = 0.0;
  for (std::size_t k = 0; k < j.size(); ++k) {
    w.push_back(get_number(j[k], path + "[" + std::to_string(k) + "]"));
    if (!(w.back() > 0.0)) schema_error(path, "weights must be positive");
    sum += w.back();
  }
  if (w.size() != expected)
    schema_error(path, std::to_string(w.size()) + " weights for " + std::to_string(expected) + " maps");
  if (std::abs(sum - 1.0) > 1e-12) schema_error(path, "weights must sum to 1 (sum is " + std::to_string(sum) + ")");
  return w;
}

DiscreteMeasure parse_measure(const json& maps, const json& weights, const std::string& base) {
  const std::string mp = join(base, "maps");
  if (!maps.is_array() || maps.empty()) schema_error(mp, "expected a nonempty list of maps");
  std::vector<RationalMap> list;
  for (std::size_t k = 0; k < maps.size(); ++k) list.push_back(parse_map(maps[k], mp + "[" + std::to_string(k) + "]"));
  auto w = parse_weights(weights, join(base, "weights"), list.size());
  try {
    return build_semigroup(std::move(list), std::move(w));
  } catch (const Error& e) {
    schema_error(mp, e.what());
  }
}

}  // namespace

RationalMap parse_map(const json& j, const std::string& path) {
  reject_unknown(j, path, {"num", "den"});
  if (!j.contains("num")) schema_error(join(path, "num"), "missing");
  Polynomial num = parse_coefficients(j.at("num"), join(path, "num"));
  Polynomial den{Complex(1.0)};
  if (j.contains("den")) den = parse_coefficients(j.at("den"), join(path, "den"));
  try {
    return RationalMap(std::move(num), std::move(den));
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

Scenario parse_scenario(const json& doc) {
  reject_unknown(doc, "", {"name", "maps", "weights", "seed", "grid", "depths", "tolerances", "takagi", "rate",
                           "holder", "oracle", "family", "nested"});
  Scenario s;
  s.echo = doc;
  optional_field(doc, "name", [&](const json& j) {
    if (!j.is_string()) schema_error("name", "expected a string");
    s.name = j.get<std::string>();
  });
  if (doc.contains("maps") || doc.contains("weights")) {
    if (!doc.contains("maps")) schema_error("maps", "missing (weights given)");
    if (!doc.contains("weights")) schema_error("weights", "missing (maps given)");
    s.measure = parse_measure(doc.at("maps"), doc.at("weights"), "");
  }
  optional_field(doc, "seed", [&](const json& j) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
      schema_error("seed", "expected a nonnegative integer");
    s.seed = j.get<std::uint64_t>();
  });
  optional_field(doc, "grid", [&](const json& g) {
    reject_unknown(g, "grid", {"center", "half_width", "resolution"});
    optional_field(g, "center", [&](const json& c) {
      if (!c.is_array() || c.size() != 2) schema_error("grid.center", "expected [re, im]");
      s.grid.center = Complex(get_number(c[0], "grid.center[0]"), get_number(c[1], "grid.center[1]"));
    });
    optional_field(g, "half_width", [&](const json& j) { s.grid.half_width = positive(j, "grid.half_width"); });
    optional_field(g, "resolution", [&](const json& j) { s.grid.resolution = get_int(j, "grid.resolution", 2); });
  });
  optional_field(doc, "depths", [&](const json& d) {
    reject_unknown(d, "depths",
                   {"classify", "words", "search", "coverage", "kernel", "orbit", "rate_iters", "max_iter",
                    "julia_points", "kernel_probes", "kernel_branch_cap", "omega_words", "omega_length", "mc_samples",
                    "mc_steps", "coverage_resolution"});
    auto& D = s.depths;
    const std::pair<const char*, int*> ints[] = {
        {"classify", &D.classify},           {"words", &D.words},
        {"search", &D.search},               {"coverage", &D.coverage},
        {"kernel", &D.kernel},               {"orbit", &D.orbit},
        {"rate_iters", &D.rate_iters},       {"max_iter", &D.max_iter},
        {"julia_points", &D.julia_points},   {"kernel_probes", &D.kernel_probes},
        {"kernel_branch_cap", &D.kernel_branch_cap}, {"omega_words", &D.omega_words},
        {"omega_length", &D.omega_length},   {"mc_samples", &D.mc_samples},
        {"mc_steps", &D.mc_steps},           {"coverage_resolution", &D.coverage_resolution}};
    for (const auto& [key, dst] : ints)
      optional_field(d, key, [&](const json& j) {
        *dst = get_int(j, std::string("depths.") + key, std::string(key) == "coverage_resolution" ? 0 : 1);
      });
    if (D.rate_iters < 10) schema_error("depths.rate_iters", "must be at least 10");
  });
  optional_field(doc, "tolerances", [&](const json& t) {
    reject_unknown(t, "tolerances", {"solve", "series", "capture"});
    optional_field(t, "solve", [&](const json& j) { s.tolerances.solve = positive(j, "tolerances.solve"); });
    optional_field(t, "series", [&](const json& j) { s.tolerances.series = positive(j, "tolerances.series"); });
    optional_field(t, "capture", [&](const json& j) { s.tolerances.capture = nonnegative(j, "tolerances.capture"); });
  });
  optional_field(doc, "takagi", [&](const json& t) {
    reject_unknown(t, "takagi", {"generator", "fd_delta", "probes"});
    optional_field(t, "generator", [&](const json& j) { s.takagi.generator = get_int(j, "takagi.generator", 0); });
    optional_field(t, "fd_delta", [&](const json& j) { s.takagi.fd_delta = positive(j, "takagi.fd_delta"); });
    optional_field(t, "probes", [&](const json& j) { s.takagi.probes = get_int(j, "takagi.probes", 0); });
  });
  optional_field(doc, "rate", [&](const json& r) {
    reject_unknown(r, "rate", {"observable"});
    optional_field(r, "observable", [&](const json& j) {
      if (!j.is_string() || (j != "random_smooth" && j != "circle_indicator"))
        schema_error("rate.observable", "expected \"random_smooth\" or \"circle_indicator\"");
      s.rate.observable = j.get<std::string>();
    });
  });
  optional_field(doc, "holder", [&](const json& h) {
    reject_unknown(h, "holder", {"samples", "r_min_cells", "r_max_cells"});
    optional_field(h, "samples", [&](const json& j) { s.holder.samples = get_int(j, "holder.samples", 0); });
    optional_field(h, "r_min_cells", [&](const json& j) { s.holder.r_min_cells = positive(j, "holder.r_min_cells"); });
    optional_field(h, "r_max_cells", [&](const json& j) { s.holder.r_max_cells = positive(j, "holder.r_max_cells"); });
  });
  optional_field(doc, "oracle", [&](const json& o) {
    reject_unknown(o, "oracle", {"a", "points", "series_depth", "recursion_depth"});
    optional_field(o, "a", [&](const json& j) {
      s.oracle.a = get_number(j, "oracle.a");
      if (!(s.oracle.a > 0.0 && s.oracle.a < 1.0)) schema_error("oracle.a", "must lie in (0,1)");
    });
    optional_field(o, "points", [&](const json& j) { s.oracle.points = get_int(j, "oracle.points", 2); });
    optional_field(o, "series_depth", [&](const json& j) { s.oracle.series_depth = get_int(j, "oracle.series_depth", 1); });
    optional_field(o, "recursion_depth",
                   [&](const json& j) { s.oracle.recursion_depth = get_int(j, "oracle.recursion_depth", 1); });
  });
  optional_field(doc, "family", [&](const json& f) {
    if (!f.is_array() || f.empty()) schema_error("family", "expected a nonempty list of members");
    for (std::size_t k = 0; k < f.size(); ++k) {
      const std::string p = "family[" + std::to_string(k) + "]";
      reject_unknown(f[k], p, {"t", "maps", "weights"});
      if (!f[k].contains("t")) schema_error(p + ".t", "missing");
      if (!f[k].contains("maps")) schema_error(p + ".maps", "missing");
      if (!f[k].contains("weights")) schema_error(p + ".weights", "missing");
      s.family.push_back({get_number(f[k].at("t"), p + ".t"), parse_measure(f[k].at("maps"), f[k].at("weights"), p)});
    }
  });
  optional_field(doc, "nested", [&](const json& j) {
    if (!j.is_boolean()) schema_error("nested", "expected a boolean");
    s.nested = j.get<bool>();
  });
  try {
    s.grid.validate();
  } catch (const Error& e) {
    schema_error("grid", e.what());
  }
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io, "cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::schema, "scenario '" + path + "': malformed JSON: " + e.what());
  }
  return parse_scenario(doc);
}

}  // namespace coopdyn
