#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "feqlab_cli/commands.hpp"

namespace {

using feqlab::cli::CommandFlags;
using feqlab::cli::OutputFormat;

void add_common(CLI::App& cmd, CommandFlags& flags, std::string& problem) {
  cmd.add_option("problem", problem, "Problem file")->required();
  cmd.add_option("--epsilon", flags.options.epsilon, "Target largest gap of the orbit net");
  cmd.add_option("--grid-n", flags.options.grid_n, "Uniform grid cells for tabulation and scans");
  cmd.add_option("--max-nodes", flags.options.max_nodes, "Orbit node budget");
  cmd.add_option("--delta-dup", flags.options.delta_dup, "Merge radius for orbit points");
  cmd.add_option("--tol-val", flags.options.tol_val, "Value tolerance for conflicting derivations");
  cmd.add_option("--out", flags.out_dir, "Output directory");
  cmd.add_option("--format", flags.format, "Console output: json, csv or text")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, OutputFormat>{{"json", OutputFormat::json},
                                              {"csv", OutputFormat::csv},
                                              {"text", OutputFormat::text}},
          CLI::ignore_case));
  cmd.add_flag("--metadata", flags.metadata, "Add timing metadata to JSON reports");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feqlab: solve and certify f(F(x,y)) = H[f(x),f(y),x,y] on an interval"};
  app.require_subcommand(1);

  CommandFlags flags;
  std::string problem;

  auto* check = app.add_subcommand("check", "Grid-verify the solver's hypotheses");
  add_common(*check, flags, problem);

  auto* solve = app.add_subcommand("solve", "Propagate boundary data and tabulate the solution");
  add_common(*solve, flags, problem);

  auto* verify = app.add_subcommand("verify", "Residuals of a solution on Gamma and on I^2");
  add_common(*verify, flags, problem);
  verify->add_option("--solution", flags.solution, "Solution CSV (z,f)");
  verify->add_option("--closed-form", flags.closed_form, "Closed-form f as an expression in z");

  auto* orbit = app.add_subcommand("orbit", "Dump the orbit table and density certificate");
  add_common(*orbit, flags, problem);
  orbit->add_option("--seed", flags.seed, "Orbit seed (default: a)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : feqlab::cli::kExitIoError;
  }

  if (*check) return feqlab::cli::cmd_check(problem, flags, std::cout, std::cerr);
  if (*solve) return feqlab::cli::cmd_solve(problem, flags, std::cout, std::cerr);
  if (*verify) return feqlab::cli::cmd_verify(problem, flags, std::cout, std::cerr);
  return feqlab::cli::cmd_orbit(problem, flags, std::cout, std::cerr);
}
