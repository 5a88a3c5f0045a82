#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coopdyn/grid.hpp"
#include "coopdyn/io.hpp"
#include "coopdyn/semigroup.hpp"

namespace coopdyn {

struct Depths {
  int classify = 200;     // orbit steps per basin label
  int words = 8;          // sampled orbits per basin label
  int search = 4;         // word length for cycle search
  int coverage = 12;      // steering search depth
  int kernel = 20;        // kernel probe word depth
  int orbit = 30;         // postcritical orbit length
  int rate_iters = 60;
  int max_iter = 5000;
  int julia_points = 20000;
  int kernel_probes = 500;
  int kernel_branch_cap = 256;
  int omega_words = 4000;
  int omega_length = 40;
  int mc_samples = 10000;
  int mc_steps = 200;
  int coverage_resolution = 0;  // 0: same as the grid
};

struct Tolerances {
  double solve = 1e-8;
  double series = 1e-6;
  double capture = 0.0;  // 0: two cell diagonals
};

struct TakagiOptions {
  int generator = 0;
  double fd_delta = 1e-3;
  int probes = 25;
};

struct RateOptions {
  std::string observable = "random_smooth";  // or "circle_indicator"
};

struct HolderOptions {
  int samples = 0;  // 0 disables the Hoelder median in `exponents`
  double r_min_cells = 4.0;
  double r_max_cells = 64.0;
};

struct OracleOptions {
  double a = 0.5;
  int points = 4097;
  int series_depth = 40;
  int recursion_depth = 50;
};

struct FamilySpec {
  double t = 0.0;
  DiscreteMeasure measure;
};

struct Scenario {
  std::string name;
  std::optional<DiscreteMeasure> measure;
  std::optional<std::uint64_t> seed;
  GridGeometry grid;
  Depths depths;
  Tolerances tolerances;
  TakagiOptions takagi;
  RateOptions rate;
  HolderOptions holder;
  OracleOptions oracle;
  std::vector<FamilySpec> family;
  bool nested = false;
  io::json echo;  // the parsed document, seed override applied
};

/// Validates against the schema (unknown keys rejected; errors name the
/// offending field path) and fills defaults.
Scenario parse_scenario(const io::json& document);
Scenario parse_scenario_file(const std::string& path);

/// Parses {"num": [[re, im], ...], "den": [...]} into a map.
RationalMap parse_map(const io::json& j, const std::string& path);

}  // namespace coopdyn
