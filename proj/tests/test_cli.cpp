#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "feqlab/io.hpp"
#include "feqlab_cli/commands.hpp"
#include "feqlab_cli/problem_file.hpp"

using namespace feqlab;
using namespace feqlab::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = FEQLAB_CORPUS_DIR;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("feqlab-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name, std::ios::binary) << text;
    return path_ / name;
  }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string problem_message(std::string_view text) {
  try {
    parse_problem_file(text, "test.prob");
  } catch (const ProblemFileError& e) {
    return e.what();
  }
  return {};
}

constexpr std::string_view kJensenText =
    "[problem]\n"
    "name = jensen-half\n"
    "F = 0.5*x + 0.5*y\n"
    "H = 0.5*u + 0.5*v\n"
    "a = 0.0\n"
    "b = 1.0\n"
    "A = 0.0\n"
    "B = 1.0\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("load the bundled Jensen problem") {
  const auto loaded = load_problem(kCorpus / "jensen.prob", {});
  const auto& p = loaded.file.problem;
  CHECK(p.name == "jensen-half");
  CHECK(p.interval == Interval(0.0, 1.0));
  CHECK(p.f == parse("0.5*x + 0.5*y", f_variables()));
  CHECK(p.h == parse("0.5*u + 0.5*v", h_variables()));
  CHECK(p.boundary_a == 0.0);
  CHECK(p.boundary_b == 1.0);
  CHECK(loaded.config.epsilon == 1e-3);
  CHECK(loaded.config.grid_n == 1000);
  CHECK(loaded.config.max_nodes == 200000);
  CHECK(loaded.config.delta_dup == doctest::Approx(1e-9));
  CHECK(loaded.config.tol_val == doctest::Approx(1e-7));
  CHECK(parse_problem_file(kJensenText).problem == p);
}

TEST_CASE("corpus round trips through serialization") {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(kCorpus)) {
    if (entry.path().extension() != ".prob") continue;
    CAPTURE(entry.path().string());
    const auto first = read_problem_file(entry.path());
    const auto text = serialize_problem_file(first);
    const auto second = parse_problem_file(text);
    CHECK(second == first);
    CHECK(serialize_problem_file(second) == text);
    ++count;
  }
  CHECK(count >= 5);
}

TEST_CASE("problem file errors") {
  std::string missing_h(kJensenText);
  missing_h.erase(missing_h.find("H = "), std::string("H = 0.5*u + 0.5*v\n").size());
  auto msg = problem_message(missing_h);
  CHECK(msg.find("'H'") != std::string::npos);
  CHECK(msg.find("test.prob") != std::string::npos);

  std::string reversed(kJensenText);
  reversed.replace(reversed.find("a = 0.0"), 7, "a = 1.0");
  reversed.replace(reversed.find("b = 1.0"), 7, "b = 0.0");
  CHECK(problem_message(reversed).find("a < b required") != std::string::npos);

  CHECK(problem_message(std::string(kJensenText) + "A = 2\n").find(":9") != std::string::npos);
  CHECK(problem_message(std::string(kJensenText) + "[extra]\n").find(":9") != std::string::npos);
  CHECK(problem_message(std::string(kJensenText) + "[options]\nepsilon = abc\n").find(":10") !=
        std::string::npos);
  CHECK_FALSE(problem_message(std::string(kJensenText) + "[options]\nbogus = 1\n").empty());
  CHECK_FALSE(problem_message("F = x\n").empty());
  CHECK_FALSE(problem_message(std::string(kJensenText) + "oops\n").empty());
  CHECK_FALSE(problem_message(std::string(kJensenText) + "[options]\nepsilon = nan\n").empty());
  CHECK_THROWS_AS(read_problem_file("/nonexistent/file.prob"), ProblemFileError);
}

TEST_CASE("flags override file options") {
  const auto file = parse_problem_file(std::string(kJensenText) + "[options]\nepsilon = 0.01\ngrid_n = 50\n");
  CHECK(file.options.epsilon == 0.01);
  OptionOverrides flags;
  flags.grid_n = 20;
  const auto cfg = resolve_config(file.problem, file.options, flags);
  CHECK(cfg.epsilon == 0.01);
  CHECK(cfg.grid_n == 20);
  CHECK(cfg.delta_dup == doctest::Approx(1e-8));
  flags.delta_dup = 0.5;
  CHECK_THROWS_AS(resolve_config(file.problem, file.options, flags), Error);
}

TEST_CASE("check exit codes") {
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cmd_check(kCorpus / "jensen.prob", {}, out, err) == kExitOk);
  CHECK(cmd_check(kCorpus / "min-slice.prob", {}, out, err) == kExitHypothesesFailed);
  CHECK(cmd_check("/nonexistent/x.prob", {}, out, err) == kExitIoError);
  CHECK_FALSE(err.str().empty());
}

TEST_CASE("solve writes a solution and a report") {
  TempDir tmp;
  CommandFlags flags;
  flags.out_dir = tmp.path();
  std::ostringstream out;
  std::ostringstream err;
  REQUIRE(cmd_solve(kCorpus / "jensen.prob", flags, out, err) == kExitOk);
  const auto csv = slurp(tmp.path() / "jensen-half.solution.csv");
  CHECK(count_lines(csv) == 1002);  // header + 1001 grid rows
  const auto report = nlohmann::json::parse(slurp(tmp.path() / "jensen-half.report.json"));
  CHECK(report["status"] == "solved");
  CHECK_FALSE(report.contains("metadata"));

  CHECK(cmd_solve(kCorpus / "perturbed.prob", flags, out, err) == kExitConflicts);
  CHECK(cmd_solve(kCorpus / "min-slice.prob", flags, out, err) == kExitHypothesesFailed);
  flags.options.max_nodes = 10;
  CHECK(cmd_solve(kCorpus / "jensen.prob", flags, out, err) == kExitNoNet);
}

TEST_CASE("solve output is byte-identical across runs") {
  TempDir t1;
  TempDir t2;
  std::ostringstream out;
  std::ostringstream err;
  CommandFlags flags;
  flags.out_dir = t1.path();
  REQUIRE(cmd_solve(kCorpus / "logmean.prob", flags, out, err) == kExitOk);
  flags.out_dir = t2.path();
  REQUIRE(cmd_solve(kCorpus / "logmean.prob", flags, out, err) == kExitOk);
  for (const char* name : {"logmean.solution.csv", "logmean.report.json"}) {
    const auto a = slurp(t1.path() / name);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(t2.path() / name));
  }
}

TEST_CASE("verify exit codes") {
  TempDir tmp;
  std::ostringstream out;
  std::ostringstream err;
  CommandFlags solve_flags;
  solve_flags.out_dir = tmp.path();
  REQUIRE(cmd_solve(kCorpus / "jensen.prob", solve_flags, out, err) == kExitOk);

  CommandFlags flags;
  flags.solution = tmp.path() / "jensen-half.solution.csv";
  flags.closed_form = "z";
  flags.format = OutputFormat::json;
  std::ostringstream json_out;
  CHECK(cmd_verify(kCorpus / "jensen.prob", flags, json_out, err) == kExitOk);
  const auto j = nlohmann::json::parse(json_out.str());
  CHECK(j["closed_form"]["sup_err"].get<double>() <= 1e-9);
  CHECK(j["residual_gamma"]["sup"].get<double>() <= 1e-6);

  std::string zeros = "z,f\n";
  for (int i = 0; i <= 10; ++i) zeros += format_real(i / 10.0) + ",0\n";
  flags = {};
  flags.solution = tmp.write("zero.csv", zeros);
  CHECK(cmd_verify(kCorpus / "jensen.prob", flags, out, err) == kExitBoundaryMismatch);

  flags.solution = tmp.write("bad.csv", "z,f\n0,0\n0.5\n");
  CHECK(cmd_verify(kCorpus / "jensen.prob", flags, out, err) == kExitIoError);

  flags.solution = tmp.path() / "missing.csv";
  CHECK(cmd_verify(kCorpus / "jensen.prob", flags, out, err) == kExitIoError);

  flags = {};
  flags.closed_form = "z + 0.01*sin(30*z)*z*(1-z)";
  CHECK(cmd_verify(kCorpus / "jensen.prob", flags, out, err) == kExitResidual);

  flags.closed_form = "z +";
  CHECK(cmd_verify(kCorpus / "jensen.prob", flags, out, err) == kExitIoError);
}

TEST_CASE("orbit writes the table and a density certificate") {
  TempDir tmp;
  std::ostringstream out;
  std::ostringstream err;
  CommandFlags flags;
  flags.out_dir = tmp.path();
  flags.seed = 0.0;
  flags.options.epsilon = 1.0 / 16;
  flags.options.delta_dup = std::ldexp(1.0, -20);
  REQUIRE(cmd_orbit(kCorpus / "jensen.prob", flags, out, err) == kExitOk);
  const auto csv = slurp(tmp.path() / "jensen-half.orbit.csv");
  CHECK(count_lines(csv) == 18);  // header + 17 dyadics
  CHECK(csv.rfind("point,depth,word\n0,0,\n0.0625,", 0) == 0);
  const auto cert = nlohmann::json::parse(slurp(tmp.path() / "jensen-half.density.json"));
  CHECK(cert["certificate"].contains("c_eps"));
  CHECK(cert["nodes"] == 17);

  flags.options.epsilon = 2.0;
  flags.options.delta_dup = 1e-9;
  REQUIRE(cmd_orbit(kCorpus / "jensen.prob", flags, out, err) == kExitOk);
  CHECK(count_lines(slurp(tmp.path() / "jensen-half.orbit.csv")) == 2);

  flags.seed = 1.5;
  CHECK(cmd_orbit(kCorpus / "jensen.prob", flags, out, err) == kExitIoError);
}

TEST_CASE("exit codes are a function of the solve status") {
  CHECK(exit_code_for(SolveStatus::solved) == 0);
  CHECK(exit_code_for(SolveStatus::hypotheses_failed) == 2);
  CHECK(exit_code_for(SolveStatus::no_net) == 3);
  CHECK(exit_code_for(SolveStatus::conflicts) == 4);
  CHECK(exit_code_for(SolveStatus::evaluation_error) == 7);
}

TEST_CASE("file_stem") {
  CHECK(file_stem("jensen-half") == "jensen-half");
  CHECK(file_stem("a b/c") == "a_b_c");
  CHECK(file_stem("") == "problem");
}

}  // TEST_SUITE
