#include "feqlab_cli/problem_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "feqlab/io.hpp"

namespace feqlab::cli {

ProblemFileError::ProblemFileError(const std::string& source, std::size_t line,
                                   const std::string& message)
    : Error(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                     : source + ": " + message),
      source_(source),
      line_(line) {}

SolveOptions RunConfig::solve_options(const Problem& problem) const {
  SolveOptions o = SolveOptions::defaults_for(problem);
  o.epsilon = epsilon;
  o.grid_n = grid_n;
  o.max_nodes = max_nodes;
  o.delta_dup = delta_dup;
  o.tol_val = tol_val;
  return o;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  std::size_t line;
};

using Section = std::map<std::string, Entry, std::less<>>;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(std::size_t line, const std::string& message) const {
    throw ProblemFileError(source_, line, message);
  }

  double real(const Section& s, std::string_view key) const {
    const Entry& e = require(s, key);
    return parse_real(e.value, e.line, key);
  }

  double parse_real(std::string_view text, std::size_t line, std::string_view key) const {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
        !std::isfinite(value)) {
      fail(line, "invalid number for '" + std::string(key) + "': '" + std::string(text) + "'");
    }
    return value;
  }

  std::size_t parse_count(std::string_view text, std::size_t line, std::string_view key) const {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
      fail(line, "invalid integer for '" + std::string(key) + "': '" + std::string(text) + "'");
    }
    return value;
  }

  const Entry& require(const Section& s, std::string_view key) const {
    auto it = s.find(key);
    if (it == s.end()) fail(0, "missing required key '" + std::string(key) + "' in [problem]");
    return it->second;
  }

  template <class Fn>
  auto with_line(std::size_t line, Fn&& fn) const {
    try {
      return fn();
    } catch (const ExprError& e) {
      fail(line, e.what());
    } catch (const InvalidArgument& e) {
      fail(line, e.what());
    }
  }

 private:
  std::string source_;
};

const std::map<std::string, std::vector<std::string>, std::less<>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> keys{
      {"problem", {"name", "F", "H", "a", "b", "A", "B"}},
      {"options", {"epsilon", "grid_n", "max_nodes", "delta_dup", "tol_val"}},
      {"oracle", {"closed_form"}},
  };
  return keys;
}

}  // namespace

ProblemFile parse_problem_file(std::string_view text, const std::string& source) {
  const Reader reader(source);
  std::map<std::string, Section, std::less<>> sections;
  std::string current;
  std::size_t line_no = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') reader.fail(line_no, "malformed section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().contains(current)) reader.fail(line_no, "unknown section [" + current + "]");
      if (sections.contains(current)) reader.fail(line_no, "duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) reader.fail(line_no, "expected 'key = value'");
    if (current.empty()) reader.fail(line_no, "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const auto& allowed = known_keys().find(current)->second;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      reader.fail(line_no, "unknown key '" + key + "' in [" + current + "]");
    }
    auto& section = sections[current];
    if (section.contains(key)) reader.fail(line_no, "duplicate key '" + key + "'");
    section.emplace(key, Entry{value, line_no});
  }

  if (!sections.contains("problem")) reader.fail(0, "missing [problem] section");
  const Section& p = sections["problem"];

  const Entry& name = reader.require(p, "name");
  const Entry& f_src = reader.require(p, "F");
  const Entry& h_src = reader.require(p, "H");
  const double a = reader.real(p, "a");
  const double b = reader.real(p, "b");
  const double A = reader.real(p, "A");
  const double B = reader.real(p, "B");
  if (!(a < b)) reader.fail(reader.require(p, "b").line, "a < b required");
  if (name.value.empty()) reader.fail(name.line, "name must not be empty");

  Expr f = reader.with_line(f_src.line, [&] { return parse(f_src.value, f_variables()); });
  Expr h = reader.with_line(h_src.line, [&] { return parse(h_src.value, h_variables()); });

  ProblemFile file{Problem{name.value, Interval(a, b), std::move(f), std::move(h), A, B},
                   {}, std::nullopt};

  if (auto it = sections.find("options"); it != sections.end()) {
    for (const auto& [key, entry] : it->second) {
      if (key == "epsilon") {
        file.options.epsilon = reader.parse_real(entry.value, entry.line, key);
      } else if (key == "delta_dup") {
        file.options.delta_dup = reader.parse_real(entry.value, entry.line, key);
      } else if (key == "tol_val") {
        file.options.tol_val = reader.parse_real(entry.value, entry.line, key);
      } else if (key == "grid_n") {
        file.options.grid_n = reader.parse_count(entry.value, entry.line, key);
      } else if (key == "max_nodes") {
        file.options.max_nodes = reader.parse_count(entry.value, entry.line, key);
      }
    }
  }
  if (auto it = sections.find("oracle"); it != sections.end()) {
    if (auto cf = it->second.find("closed_form"); cf != it->second.end()) {
      file.closed_form = reader.with_line(cf->second.line, [&] {
        return parse(cf->second.value, closed_form_variables());
      });
    }
  }
  return file;
}

ProblemFile read_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProblemFileError(path.string(), 0, "cannot open problem file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_file(buf.str(), path.string());
}

std::string serialize_problem_file(const ProblemFile& file) {
  const auto& p = file.problem;
  std::ostringstream out;
  out << "[problem]\n"
      << "name = " << p.name << '\n'
      << "F = " << print(p.f) << '\n'
      << "H = " << print(p.h) << '\n'
      << "a = " << format_real(p.interval.a()) << '\n'
      << "b = " << format_real(p.interval.b()) << '\n'
      << "A = " << format_real(p.boundary_a) << '\n'
      << "B = " << format_real(p.boundary_b) << '\n';
  const auto& o = file.options;
  if (o != OptionOverrides{}) {
    out << "\n[options]\n";
    if (o.epsilon) out << "epsilon = " << format_real(*o.epsilon) << '\n';
    if (o.grid_n) out << "grid_n = " << *o.grid_n << '\n';
    if (o.max_nodes) out << "max_nodes = " << *o.max_nodes << '\n';
    if (o.delta_dup) out << "delta_dup = " << format_real(*o.delta_dup) << '\n';
    if (o.tol_val) out << "tol_val = " << format_real(*o.tol_val) << '\n';
  }
  if (file.closed_form) {
    out << "\n[oracle]\nclosed_form = " << print(*file.closed_form) << '\n';
  }
  return out.str();
}

RunConfig resolve_config(const Problem& problem, const OptionOverrides& file,
                         const OptionOverrides& flags) {
  auto pick = [](const auto& flag, const auto& from_file) {
    return flag ? flag : from_file;
  };
  RunConfig c;
  c.epsilon = pick(flags.epsilon, file.epsilon).value_or(1e-3 * problem.interval.length());
  c.grid_n = pick(flags.grid_n, file.grid_n).value_or(1000);
  c.max_nodes = pick(flags.max_nodes, file.max_nodes).value_or(200000);
  c.delta_dup = pick(flags.delta_dup, file.delta_dup).value_or(c.epsilon * 1e-6);
  c.tol_val = pick(flags.tol_val, file.tol_val).value_or(1e-7 * problem.value_scale());
  if (!(c.delta_dup > 0.0) || !(c.epsilon > c.delta_dup)) {
    throw InvalidArgument("epsilon > delta_dup > 0 required");
  }
  if (c.grid_n < 1) throw InvalidArgument("grid_n >= 1 required");
  if (!(c.tol_val >= 0.0)) throw InvalidArgument("tol_val >= 0 required");
  return c;
}

LoadedProblem load_problem(const std::filesystem::path& path, const OptionOverrides& flags) {
  ProblemFile file = read_problem_file(path);
  RunConfig config;
  try {
    config = resolve_config(file.problem, file.options, flags);
  } catch (const InvalidArgument& e) {
    throw ProblemFileError(path.string(), 0, e.what());
  }
  return {std::move(file), config};
}

}  // namespace feqlab::cli
