#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coopdyn/cloud.hpp"
#include "coopdyn/grid.hpp"
#include "coopdyn/semigroup.hpp"

namespace coopdyn {

struct MinimalSetOptions {
  int search_depth = 4;           // longest sampled word for cycle search
  int words_per_length = 16;
  double capture_tolerance = 0.0;  // <= 0: two cell diagonals of the grid
  std::size_t max_points = 20000;  // closure size cap
  int max_closure_rounds = 400;
};

/// Candidate seeds: attracting cycles of sampled words, closed under every
/// generator; {inf} appended for polynomial systems. Each result carries its
/// period structure; classification is left unresolved (or attracting for
/// the infinity set).
std::vector<MinimalSetEstimate> find_attracting_minimal_sets(const DiscreteMeasure& measure,
                                                             const GridGeometry& geometry,
                                                             const MinimalSetOptions& options, std::uint64_t seed);

/// As above, plus closures of non-attracting fixed points of generators.
std::vector<MinimalSetEstimate> discover_minimal_sets(const DiscreteMeasure& measure, const GridGeometry& geometry,
                                                      const MinimalSetOptions& options, std::uint64_t seed);

/// True iff every generator maps every sample within tolerance of the cloud.
bool closure_holds(const GeneratorSystem& system, const MinimalSetEstimate& set, double tolerance);

struct ClassifyOptions {
  double capture_tolerance = 0.0;
  double ring_scale = 4.0;  // U radius in capture tolerances
  int max_n = 12;           // longest word length tried for the two-ring witness
  std::size_t words_per_n = 64;
  int rotation_iterations = 4000;
};

MinimalSetClass classify_minimal_set(const DiscreteMeasure& measure, const MinimalSetEstimate& set,
                                     const PointCloud& julia_cloud, const GridGeometry& geometry,
                                     const ClassifyOptions& options, std::uint64_t seed);

struct PeriodStructure {
  bool resolved = false;
  int period = 1;
  std::vector<PointCloud> components;
  std::string diagnostic;
};

PeriodStructure period_structure(const GeneratorSystem& system, const MinimalSetEstimate& set, int r_max,
                                 double tolerance);

/// U and V as node masks: V-bar inside U with a one-node margin.
struct MeanStabilityWitness {
  std::vector<std::uint8_t> U, V;
  int n = 0;
  int coverage_depth = 0;
};

enum class Verdict { yes, no, inconclusive };

const char* to_string(Verdict v) noexcept;

struct MeanStabilityOptions {
  MinimalSetOptions discovery;
  ClassifyOptions classify;
  std::size_t julia_points = 20000;
  int coverage_depth = 12;
  /// Grid used for the steering condition; defaults to the main geometry.
  int coverage_resolution = 0;
};

struct MeanStabilityResult {
  Verdict verdict = Verdict::inconclusive;
  std::vector<MinimalSetEstimate> sets;
  MeanStabilityWitness witness;
  int counterexample = -1;  // index into sets
  std::size_t uncovered_cells = 0;
  std::string diagnostic;
};

MeanStabilityResult test_mean_stability(const DiscreteMeasure& measure, const GridGeometry& geometry,
                                        const MeanStabilityOptions& options, std::uint64_t seed);

struct BifurcationRow {
  double t = 0.0;
  std::size_t count = 0;
  Verdict verdict = Verdict::inconclusive;
  double undecided_fraction = 0.0;
  bool monotonicity_warning = false;
  std::vector<std::uint8_t> witness_U;  // empty unless the verdict is yes
};

struct FamilyMember {
  double t = 0.0;
  DiscreteMeasure measure;
};

struct BifurcationOptions {
  MeanStabilityOptions stability;
  int classify_depth = 100;
  int classify_words = 4;
  bool nested = false;
};

std::vector<BifurcationRow> scan_family_bifurcation(const std::vector<FamilyMember>& family,
                                                    const GridGeometry& geometry, const BifurcationOptions& options,
                                                    std::uint64_t seed);

}  // namespace coopdyn
