#pragma once

// Grid checks of the conditions under which the Gamma-restricted equation
// determines f uniquely: F maps I^2 into I, both boundary slices contract,
// the slices reach the endpoints, and their images cover I.

#include <cstddef>
#include <string>
#include <vector>

#include "feqlab/dynsys.hpp"
#include "feqlab/problem.hpp"

namespace feqlab {

struct CheckResult {
  bool ok = false;
  double worst = 0.0;
};

enum class ContractionStatus { contracting, marginal, not_contracting };

const char* to_string(ContractionStatus status);

struct SliceContraction {
  double c1 = 0.0;
  double c2 = 0.0;
  bool ok = false;
  ContractionStatus status = ContractionStatus::not_contracting;
};

struct Witnesses {
  double x0 = 0.0;  // F(a, x0) ~ a
  double r1 = 0.0;
  double y0 = 0.0;  // F(y0, b) ~ b
  double r2 = 0.0;
  bool ok = false;
};

struct CoverCheck {
  bool ok = false;
  double gap = 0.0;
  Hull hull1{0.0, 0.0};
  Hull hull2{0.0, 0.0};
};

/// Tolerance for check_maps_into.
inline constexpr double kMapsIntoTolerance = 1e-12;
/// Default slack below 1 required of an estimated contraction modulus.
inline constexpr double kContractionMargin = 1e-6;

/// Scans the (grid_n+1)^2 grid on I^2; worst is the largest overshoot outside I.
CheckResult check_maps_into(const Expr& f, const Interval& interval, std::size_t grid_n);

/// min(x,y) < F(x,y) < max(x,y) off the diagonal. Diagnostic only.
CheckResult check_internality(const Expr& f, const Interval& interval, std::size_t grid_n);

SliceContraction check_slice_contraction(const DynSystem& sys, double epsilon,
                                         std::size_t grid_n,
                                         double margin = kContractionMargin);

/// Best grid point followed by 60 trisection rounds on its bracketing cells.
Witnesses find_witnesses(const DynSystem& sys, std::size_t grid_n, double tol);

/// Uncovered length of I outside hull(delta1) and hull(delta2).
CoverCheck check_cover(const DynSystem& sys, std::size_t grid_n);

struct HypothesisConfig {
  std::size_t grid_n = 1000;
  double epsilon = 1e-3;
  double witness_tol = 1e-9;
  double margin = kContractionMargin;

  /// epsilon = 1e-3 (b-a), witness_tol = 1e-9 (b-a).
  static HypothesisConfig defaults_for(const Interval& interval);
};

struct HypothesisReport {
  CheckResult maps_into;
  CheckResult internality;
  SliceContraction slice_contraction;
  Witnesses witnesses;
  CoverCheck cover;
  std::size_t grid_n = 0;
  double epsilon = 0.0;
  // Set when F does not map into I; the remaining checks were not run.
  bool preconditions_violated = false;
  std::vector<std::string> errors;

  /// Every required condition holds; internality is not required.
  bool all_ok() const;
};

HypothesisReport run_all(const Problem& problem, const HypothesisConfig& config);

}  // namespace feqlab
