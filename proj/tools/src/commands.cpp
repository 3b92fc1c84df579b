#include "feqlab_cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "feqlab/io.hpp"
#include "feqlab/verify.hpp"

namespace feqlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::solved: return kExitOk;
    case SolveStatus::hypotheses_failed: return kExitHypothesesFailed;
    case SolveStatus::no_net: return kExitNoNet;
    case SolveStatus::conflicts: return kExitConflicts;
    case SolveStatus::evaluation_error: return kExitEvaluation;
  }
  return kExitIoError;
}

std::string file_stem(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out.empty() ? std::string("problem") : out;
}

namespace {

using Clock = std::chrono::steady_clock;

/// Writes `content` to dir/name, creating dir. Throws Error on failure.
fs::path write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Error("cannot write " + path.string());
  return path;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void add_metadata(json& j, const CommandFlags& flags, const char* command, Clock::time_point start) {
  if (!flags.metadata) return;
  const auto ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  j["metadata"] = {{"tool", "feqlab"}, {"command", command}, {"elapsed_ms", ms}};
}

const char* yes_no(bool ok) { return ok ? "ok  " : "FAIL"; }

void print_hypotheses_text(std::ostream& out, const Problem& p, const HypothesisReport& r) {
  out << "problem " << p.name << " on [" << format_real(p.interval.a()) << ", "
      << format_real(p.interval.b()) << "]\n";
  out << "  maps_into          " << yes_no(r.maps_into.ok) << "  worst overshoot "
      << format_real(r.maps_into.worst) << '\n';
  out << "  internality        " << yes_no(r.internality.ok) << "  worst "
      << format_real(r.internality.worst) << "  (diagnostic)\n";
  if (r.preconditions_violated) {
    out << "  preconditions violated; remaining checks not run\n";
  } else {
    const auto& s = r.slice_contraction;
    out << "  slice_contraction  " << yes_no(s.ok) << "  c1 " << format_real(s.c1) << "  c2 "
        << format_real(s.c2) << "  (" << to_string(s.status) << ")\n";
    const auto& w = r.witnesses;
    out << "  witnesses          " << yes_no(w.ok) << "  x0 " << format_real(w.x0) << "  r1 "
        << format_real(w.r1) << "  y0 " << format_real(w.y0) << "  r2 " << format_real(w.r2)
        << '\n';
    out << "  cover              " << yes_no(r.cover.ok) << "  gap " << format_real(r.cover.gap)
        << '\n';
  }
  for (const auto& e : r.errors) out << "  error: " << e << '\n';
  out << (r.all_ok() ? "all required hypotheses hold\n" : "hypotheses not satisfied\n");
}

void print_hypotheses_csv(std::ostream& out, const HypothesisReport& r) {
  out << "check,ok,value\n";
  out << "maps_into," << r.maps_into.ok << ',' << format_real(r.maps_into.worst) << '\n';
  out << "internality," << r.internality.ok << ',' << format_real(r.internality.worst) << '\n';
  const auto& s = r.slice_contraction;
  out << "slice_contraction," << s.ok << ',' << format_real(std::max(s.c1, s.c2)) << '\n';
  const auto& w = r.witnesses;
  out << "witnesses," << w.ok << ',' << format_real(std::max(w.r1, w.r2)) << '\n';
  out << "cover," << r.cover.ok << ',' << format_real(r.cover.gap) << '\n';
}

HypothesisConfig hypothesis_config(const Problem& p, const RunConfig& c) {
  HypothesisConfig hc = HypothesisConfig::defaults_for(p.interval);
  hc.grid_n = std::max<std::size_t>(c.grid_n, 2);
  hc.epsilon = std::min(c.epsilon, p.interval.length());
  return hc;
}

void print_residual(std::ostream& out, const char* label, const ResidualReport& r) {
  out << "  " << label << " sup " << format_real(r.sup) << " at (" << format_real(r.argmax_x)
      << ", " << format_real(r.argmax_y) << ")  mean " << format_real(r.mean);
  if (r.sup_at_samples) out << "  at samples " << format_real(*r.sup_at_samples);
  out << '\n';
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  }
}

LoadedProblem load(const fs::path& path, const CommandFlags& flags) {
  LoadedProblem loaded = load_problem(path, flags.options);
  loaded.config.format = flags.format;
  if (flags.out_dir) loaded.config.out_dir = *flags.out_dir;
  return loaded;
}

}  // namespace

int cmd_check(const fs::path& problem_path, const CommandFlags& flags, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto start = Clock::now();
    const LoadedProblem loaded = load(problem_path, flags);
    const Problem& p = loaded.file.problem;
    const HypothesisReport report = run_all(p, hypothesis_config(p, loaded.config));

    json j = report;
    j["name"] = p.name;
    add_metadata(j, flags, "check", start);
    switch (flags.format) {
      case OutputFormat::json: out << dump(j); break;
      case OutputFormat::csv: print_hypotheses_csv(out, report); break;
      case OutputFormat::text: print_hypotheses_text(out, p, report); break;
    }
    if (flags.out_dir) write_file(*flags.out_dir, file_stem(p.name) + ".hypotheses.json", dump(j));
    return report.all_ok() ? kExitOk : kExitHypothesesFailed;
  });
}

int cmd_solve(const fs::path& problem_path, const CommandFlags& flags, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto start = Clock::now();
    const LoadedProblem loaded = load(problem_path, flags);
    const Problem& p = loaded.file.problem;
    const SolveReport report = solve(p, loaded.config.solve_options(p));

    json j = report;
    std::optional<ClosedFormComparison> oracle;
    if (loaded.file.closed_form && report.solution) {
      oracle = compare_closed_form(*report.solution, *loaded.file.closed_form);
      j["oracle"] = {{"closed_form", print(*loaded.file.closed_form)},
                     {"sup_err", oracle->sup_err},
                     {"argmax", oracle->argmax}};
    }
    add_metadata(j, flags, "solve", start);

    const fs::path dir = loaded.config.out_dir;
    const std::string stem = file_stem(p.name);
    std::string csv;
    if (report.solution) {
      std::ostringstream s;
      write_solution_csv(s, *report.solution);
      csv = s.str();
      write_file(dir, stem + ".solution.csv", csv);
    }
    write_file(dir, stem + ".report.json", dump(j));

    switch (flags.format) {
      case OutputFormat::json: out << dump(j); break;
      case OutputFormat::csv: out << csv; break;
      case OutputFormat::text:
        out << p.name << ": " << to_string(report.status) << '\n';
        if (!report.message.empty()) out << "  " << report.message << '\n';
        if (report.density) {
          out << "  samples " << report.sample_count << " (max depth " << report.max_depth
              << "), largest gap " << format_real(report.density->achieved_gap)
              << ", c_eps " << format_real(report.density->c_eps) << '\n';
          out << "  conflicts " << report.conflict_count << ", max value difference "
              << format_real(report.max_conflict) << '\n';
        }
        if (report.residual_gamma) print_residual(out, "gamma residual ", *report.residual_gamma);
        if (report.residual_square) print_residual(out, "square residual", *report.residual_square);
        if (oracle) {
          out << "  closed form " << print(*loaded.file.closed_form) << ": sup error "
              << format_real(oracle->sup_err) << '\n';
        }
        if (report.status == SolveStatus::hypotheses_failed) {
          print_hypotheses_text(out, p, report.hypotheses);
        }
        break;
    }
    return exit_code_for(report.status);
  });
}

int cmd_verify(const fs::path& problem_path, const CommandFlags& flags, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto start = Clock::now();
    const LoadedProblem loaded = load(problem_path, flags);
    const Problem& p = loaded.file.problem;
    const RunConfig& c = loaded.config;

    std::optional<Expr> closed_form;
    if (flags.closed_form) {
      closed_form = parse(*flags.closed_form, closed_form_variables());
    } else if (!flags.solution) {
      closed_form = loaded.file.closed_form;
    }

    std::optional<TabulatedFunction> f;
    if (flags.solution) {
      std::ifstream in(*flags.solution, std::ios::binary);
      if (!in) throw Error("cannot open solution file " + flags.solution->string());
      f = read_solution_csv(in);
      const double tol = 1e-9 * p.interval.length();
      if (std::abs(f->grid().front() - p.interval.a()) > tol ||
          std::abs(f->grid().back() - p.interval.b()) > tol) {
        throw Error("solution grid does not span [a, b]");
      }
    } else if (closed_form) {
      f = tabulate(*closed_form, p.interval, c.grid_n);
    } else {
      throw Error("verify needs --solution, --closed-form or an [oracle] closed_form");
    }

    const auto gamma = residual_on_gamma(*f, p, c.grid_n);
    const auto square = residual_on_square(*f, p, c.grid_n);
    const auto boundary = check_boundary(*f, p, c.tol_val);
    const bool overdetermined = is_overdetermined(gamma, square, p.value_scale());
    const double threshold = kVerifyGammaThreshold * p.value_scale();

    int code = kExitOk;
    if (!boundary.ok) {
      code = kExitBoundaryMismatch;
    } else if (gamma.sup > threshold) {
      code = kExitResidual;
    }

    json j = {{"name", p.name},
              {"residual_gamma", gamma},
              {"residual_square", square},
              {"boundary", boundary},
              {"gamma_threshold", threshold},
              {"overdetermined", overdetermined},
              {"closed_form", nullptr},
              {"passed", code == kExitOk}};
    std::optional<ClosedFormComparison> cmp;
    if (closed_form) {
      cmp = compare_closed_form(*f, *closed_form);
      j["closed_form"] = {{"expr", print(*closed_form)},
                          {"sup_err", cmp->sup_err},
                          {"argmax", cmp->argmax}};
    }
    add_metadata(j, flags, "verify", start);
    if (flags.out_dir) write_file(*flags.out_dir, file_stem(p.name) + ".verify.json", dump(j));

    switch (flags.format) {
      case OutputFormat::json: out << dump(j); break;
      case OutputFormat::csv:
        out << "domain,grid_n,sup,mean,argmax_x,argmax_y\n";
        for (const auto* r : {&gamma, &square}) {
          out << to_string(r->domain) << ',' << r->grid_n << ',' << format_real(r->sup) << ','
              << format_real(r->mean) << ',' << format_real(r->argmax_x) << ','
              << format_real(r->argmax_y) << '\n';
        }
        break;
      case OutputFormat::text:
        out << p.name << '\n';
        print_residual(out, "gamma residual ", gamma);
        print_residual(out, "square residual", square);
        out << "  boundary |f(a)-A| " << format_real(boundary.error_a) << "  |f(b)-B| "
            << format_real(boundary.error_b) << (boundary.ok ? "" : "  (boundary mismatch)")
            << '\n';
        if (cmp) {
          out << "  closed form " << print(*closed_form) << ": sup error "
              << format_real(cmp->sup_err) << " at z = " << format_real(cmp->argmax) << '\n';
        }
        if (overdetermined) {
          out << "  overdetermined instance: Gamma-solvable, I^2-unsolvable\n";
        }
        out << (code == kExitOk ? "verified\n" : "not verified\n");
        break;
    }
    return code;
  });
}

int cmd_orbit(const fs::path& problem_path, const CommandFlags& flags, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto start = Clock::now();
    const LoadedProblem loaded = load(problem_path, flags);
    const Problem& p = loaded.file.problem;
    const RunConfig& c = loaded.config;
    const double seed = flags.seed.value_or(p.interval.a());
    if (!p.interval.contains(seed)) {
      throw Error("seed " + format_real(seed) + " lies outside [" + format_real(p.interval.a()) +
                  ", " + format_real(p.interval.b()) + "]");
    }

    std::optional<DynSystem> sys;
    try {
      sys.emplace(make_system(p.f, p.interval));
    } catch (const RangeViolation& e) {
      err << "error: " << e.what() << '\n';
      return static_cast<int>(kExitHypothesesFailed);
    }

    OrbitTable table;
    try {
      table = orbit_expand(*sys, seed, c.epsilon, c.max_nodes, c.delta_dup);
    } catch (const IncompleteNet& e) {
      err << "error: " << e.what() << " (largest gap " << format_real(e.achieved_gap())
          << " after " << e.nodes() << " nodes)\n";
      return static_cast<int>(kExitNoNet);
    }
    const auto cert = certify_density(*sys, c.epsilon, std::max<std::size_t>(c.grid_n, 2),
                                      table.largest_gap);

    std::ostringstream csv;
    write_orbit_csv(csv, table);
    json j = {{"name", p.name},
              {"seed", seed},
              {"nodes", table.nodes.size()},
              {"max_depth", table.max_depth()},
              {"delta_dup", table.delta_dup},
              {"certificate", cert}};
    add_metadata(j, flags, "orbit", start);
    const std::string stem = file_stem(p.name);
    write_file(c.out_dir, stem + ".orbit.csv", csv.str());
    write_file(c.out_dir, stem + ".density.json", dump(j));

    switch (flags.format) {
      case OutputFormat::json: out << dump(j); break;
      case OutputFormat::csv: out << csv.str(); break;
      case OutputFormat::text:
        out << p.name << ": orbit of " << format_real(seed) << '\n'
            << "  nodes " << table.nodes.size() << ", max depth " << table.max_depth()
            << ", largest gap " << format_real(table.largest_gap) << '\n'
            << "  c1 " << format_real(cert.c1) << ", c2 " << format_real(cert.c2)
            << ", depth bound "
            << (cert.depth_bound ? std::to_string(*cert.depth_bound) : std::string("n/a"))
            << '\n';
        break;
    }
    return static_cast<int>(kExitOk);
  });
}

}  // namespace feqlab::cli
