#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "feqlab_cli/problem_file.hpp"

namespace feqlab::cli {

/// Process exit codes. Each failure mode gets its own code so that corpora
/// can be triaged by script.
enum ExitCode : int {
  kExitOk = 0,
  kExitIoError = 1,  // I/O, parse or usage error
  kExitHypothesesFailed = 2,
  kExitNoNet = 3,
  kExitConflicts = 4,
  kExitBoundaryMismatch = 5,
  kExitResidual = 6,  // verify: Gamma residual above threshold
  kExitEvaluation = 7,  // F or H failed to evaluate while solving
};

int exit_code_for(SolveStatus status);

struct CommandFlags {
  OptionOverrides options;
  std::optional<std::filesystem::path> out_dir;
  OutputFormat format = OutputFormat::text;
  std::optional<double> seed;
  std::optional<std::filesystem::path> solution;
  std::optional<std::string> closed_form;
  bool metadata = false;  // adds a non-deterministic metadata block to JSON reports
};

/// Verify passes when the Gamma residual is at most this times max(1,|A|,|B|).
inline constexpr double kVerifyGammaThreshold = 1e-6;

int cmd_check(const std::filesystem::path& problem, const CommandFlags& flags,
              std::ostream& out, std::ostream& err);
int cmd_solve(const std::filesystem::path& problem, const CommandFlags& flags,
              std::ostream& out, std::ostream& err);
int cmd_verify(const std::filesystem::path& problem, const CommandFlags& flags,
               std::ostream& out, std::ostream& err);
int cmd_orbit(const std::filesystem::path& problem, const CommandFlags& flags,
              std::ostream& out, std::ostream& err);

/// File-name-safe form of a problem name.
std::string file_stem(const std::string& name);

}  // namespace feqlab::cli
