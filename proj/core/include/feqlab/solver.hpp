#pragma once

// Computes the solution of f(F(x,y)) = H[f(x), f(y), x, y] with f(a) = A,
// f(b) = B by spreading the boundary values along the orbit of the endpoints:
//
//   f(delta1(z)) = H[A, f(z), a, z]      f(delta2(z)) = H[f(z), B, z, b]
//
// and interpolating the resulting dense sample set on a uniform grid.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "feqlab/dynsys.hpp"
#include "feqlab/hypotheses.hpp"
#include "feqlab/problem.hpp"
#include "feqlab/tabulated.hpp"
#include "feqlab/verify.hpp"

namespace feqlab {

enum class SeedOrder { a_first, b_first };

struct Sample {
  static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

  double point;
  double value;
  Word word;  // empty for the two boundary seeds
  std::size_t parent = kNoParent;  // index into SampleTable::samples

  std::size_t depth() const noexcept { return word.size(); }
};

struct Conflict {
  double point;
  double incumbent;
  double candidate;
  double difference;
  Word incumbent_word;
  Word candidate_word;
};

struct SampleTable {
  std::vector<Sample> samples;  // ascending by point; a and b always present
  double delta_dup = 0.0;
  bool net_complete = false;
  double largest_gap = 0.0;

  // Only the first kConflictLogLimit conflicts are kept.
  static constexpr std::size_t kConflictLogLimit = 1000;
  std::vector<Conflict> conflicts;
  std::size_t conflict_count = 0;
  double max_conflict = 0.0;  // largest |value difference| at a merged point

  // Largest |f(child) - H(parent ...)| recomputed after propagation, and
  // whether it exceeded the 1e-12 * depth budget at any sample.
  double gamma_consistency = 0.0;
  bool rounding_budget_exceeded = false;

  std::size_t max_depth() const;
  /// Index of the sample within delta_dup of `point`.
  std::optional<std::size_t> find(double point) const;
  /// Linear interpolation between bracketing samples.
  double interpolate(double z) const;
  std::vector<double> points() const;
  std::vector<double> values() const;
};

/// A derivation step failed to evaluate.
class PropagationError : public EvaluationError {
 public:
  PropagationError(const std::string& what, double point, Word word)
      : EvaluationError(what, point, std::numeric_limits<double>::quiet_NaN()),
        word_(std::move(word)) {}
  const Word& word() const noexcept { return word_; }

 private:
  Word word_;
};

struct PropagateOptions {
  double epsilon = 1e-3;
  std::size_t max_nodes = 200000;
  double delta_dup = 1e-9;
  double tol_val = 1e-7;
  MapOrder map_order = MapOrder::map1_first;
  SeedOrder seed_order = SeedOrder::a_first;
};

/// Breadth-first propagation from the seeds (a, A) and (b, B). A child landing
/// within delta_dup of an existing sample keeps the incumbent; a value
/// difference above tol_val is logged as a conflict.
SampleTable propagate(const Problem& problem, const PropagateOptions& options);

/// Piecewise-linear reconstruction on the uniform grid spanned by the first
/// and last samples.
TabulatedFunction reconstruct(const SampleTable& samples, std::size_t grid_n);

struct SolveOptions {
  double epsilon = 1e-3;
  std::size_t grid_n = 1000;
  std::size_t max_nodes = 200000;
  double delta_dup = 1e-9;
  double tol_val = 1e-7;
  double witness_tol = 1e-9;
  double margin = kContractionMargin;
  MapOrder map_order = MapOrder::map1_first;
  SeedOrder seed_order = SeedOrder::a_first;

  /// epsilon = 1e-3 (b-a), delta_dup = 1e-6 epsilon, tol_val = 1e-7 max(1,|A|,|B|).
  static SolveOptions defaults_for(const Problem& problem);
  void validate() const;
};

enum class SolveStatus { solved, no_net, conflicts, hypotheses_failed, evaluation_error };

const char* to_string(SolveStatus status);

struct SolveReport {
  std::string name;
  SolveStatus status = SolveStatus::hypotheses_failed;
  HypothesisReport hypotheses;
  std::optional<DensityCertificate> density;
  std::size_t sample_count = 0;
  std::size_t max_depth = 0;
  std::size_t conflict_count = 0;
  double max_conflict = 0.0;
  std::vector<Conflict> conflicts;
  double gamma_consistency = 0.0;
  bool rounding_budget_exceeded = false;
  std::optional<ResidualReport> residual_gamma;
  std::optional<ResidualReport> residual_square;
  std::optional<BoundaryCheck> boundary;
  bool overdetermined = false;
  std::optional<TabulatedFunction> solution;
  std::string message;
};

SolveReport solve(const Problem& problem, const SolveOptions& options);

}  // namespace feqlab
