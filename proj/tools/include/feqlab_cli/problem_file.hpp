#pragma once

// Line-oriented problem files:
//
//   [problem]            name, F, H, a, b, A, B        (required)
//   [options]            epsilon, grid_n, max_nodes, delta_dup, tol_val
//   [oracle]             closed_form                   (expression in z)
//
// `key = value` lines, `#` comments, UTF-8.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "feqlab/error.hpp"
#include "feqlab/expr.hpp"
#include "feqlab/problem.hpp"
#include "feqlab/solver.hpp"

namespace feqlab::cli {

class ProblemFileError : public Error {
 public:
  ProblemFileError(const std::string& source, std::size_t line, const std::string& message);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }  // 0 when not tied to a line

 private:
  std::string source_;
  std::size_t line_;
};

enum class OutputFormat { text, json, csv };

/// Option values given explicitly, either in a file or as flags.
struct OptionOverrides {
  std::optional<double> epsilon;
  std::optional<std::size_t> grid_n;
  std::optional<std::size_t> max_nodes;
  std::optional<double> delta_dup;
  std::optional<double> tol_val;

  bool operator==(const OptionOverrides&) const = default;
};

/// Fully resolved run settings.
struct RunConfig {
  double epsilon = 0.0;
  std::size_t grid_n = 1000;
  std::size_t max_nodes = 200000;
  double delta_dup = 0.0;
  double tol_val = 0.0;
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::text;

  SolveOptions solve_options(const Problem& problem) const;
};

struct ProblemFile {
  Problem problem;
  OptionOverrides options;  // as written in the [options] section
  std::optional<Expr> closed_form;

  bool operator==(const ProblemFile&) const = default;
};

ProblemFile parse_problem_file(std::string_view text, const std::string& source = "<input>");
ProblemFile read_problem_file(const std::filesystem::path& path);

/// Canonical text; parse_problem_file(serialize_problem_file(p)) == p.
std::string serialize_problem_file(const ProblemFile& file);

/// Flags override file options; defaults fill the rest.
RunConfig resolve_config(const Problem& problem, const OptionOverrides& file,
                         const OptionOverrides& flags);

struct LoadedProblem {
  ProblemFile file;
  RunConfig config;
};

LoadedProblem load_problem(const std::filesystem::path& path, const OptionOverrides& flags);

}  // namespace feqlab::cli
