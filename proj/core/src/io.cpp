#include "feqlab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string_view>

namespace feqlab {

std::string format_real(double value) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_orbit_csv(std::ostream& out, const OrbitTable& table) {
  out << "point,depth,word\n";
  for (const auto& node : table.nodes) {
    out << format_real(node.point) << ',' << node.depth() << ',' << node.word << '\n';
  }
}

void write_solution_csv(std::ostream& out, const TabulatedFunction& f) {
  out << "z,f\n";
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    out << format_real(f.grid()[i]) << ',' << format_real(f.values()[i]) << '\n';
  }
}

namespace {

double parse_field(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw CsvError("line " + std::to_string(line) + ": '" + std::string(field) +
                       "' is not a finite number",
                   line);
  }
  return value;
}

}  // namespace

TabulatedFunction read_solution_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw CsvError("empty solution file", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "z,f") throw CsvError("line 1: expected header 'z,f'", 1);

  std::vector<double> grid;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw CsvError("line " + std::to_string(line_no) + ": expected two fields", line_no);
    }
    const std::string_view view(line);
    const double z = parse_field(view.substr(0, comma), line_no);
    const double v = parse_field(view.substr(comma + 1), line_no);
    if (!grid.empty() && !(z > grid.back())) {
      throw CsvError("line " + std::to_string(line_no) + ": z must be strictly increasing",
                     line_no);
    }
    grid.push_back(z);
    values.push_back(v);
  }
  if (grid.size() < 2) throw CsvError("solution file needs at least two rows", line_no);
  return TabulatedFunction(std::move(grid), std::move(values));
}

// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const CheckResult& r) {
  j = {{"ok", r.ok}, {"worst", r.worst}};
}

void to_json(nlohmann::json& j, const HypothesisReport& r) {
  const auto& s = r.slice_contraction;
  const auto& w = r.witnesses;
  j = {
      {"maps_into", r.maps_into},
      {"internality", r.internality},
      {"slice_contraction",
       {{"c1", s.c1}, {"c2", s.c2}, {"ok", s.ok}, {"status", to_string(s.status)}}},
      {"witnesses", {{"x0", w.x0}, {"r1", w.r1}, {"y0", w.y0}, {"r2", w.r2}, {"ok", w.ok}}},
      {"cover",
       {{"ok", r.cover.ok},
        {"gap", r.cover.gap},
        {"hull1", {r.cover.hull1.lo, r.cover.hull1.hi}},
        {"hull2", {r.cover.hull2.lo, r.cover.hull2.hi}}}},
      {"grid_n", r.grid_n},
      {"epsilon", r.epsilon},
      {"preconditions_violated", r.preconditions_violated},
      {"all_ok", r.all_ok()},
      {"errors", r.errors},
  };
}

void to_json(nlohmann::json& j, const DensityCertificate& c) {
  j = {{"epsilon", c.epsilon}, {"c1", c.c1},           {"c2", c.c2},
       {"c_eps", c.c_eps},     {"depth_bound", nullptr}, {"achieved_gap", c.achieved_gap}};
  if (c.depth_bound) j["depth_bound"] = *c.depth_bound;
}

void to_json(nlohmann::json& j, const ResidualReport& r) {
  j = {{"domain", to_string(r.domain)},
       {"grid_n", r.grid_n},
       {"sup", r.sup},
       {"mean", r.mean},
       {"argmax", {r.argmax_x, r.argmax_y}},
       {"sup_at_samples", nullptr}};
  if (r.sup_at_samples) j["sup_at_samples"] = *r.sup_at_samples;
}

void to_json(nlohmann::json& j, const BoundaryCheck& b) {
  j = {{"error_a", b.error_a}, {"error_b", b.error_b}, {"ok", b.ok}};
}

void to_json(nlohmann::json& j, const ClosedFormComparison& c) {
  j = {{"sup_err", c.sup_err}, {"argmax", c.argmax}};
}

void to_json(nlohmann::json& j, const SolveReport& r) {
  auto optional = [](const auto& value) -> nlohmann::json {
    if (value) return *value;
    return nullptr;
  };
  nlohmann::json conflicts = nlohmann::json::array();
  for (const auto& c : r.conflicts) {
    conflicts.push_back({{"point", c.point},
                         {"incumbent", c.incumbent},
                         {"candidate", c.candidate},
                         {"difference", c.difference},
                         {"incumbent_word", c.incumbent_word},
                         {"candidate_word", c.candidate_word}});
  }
  nlohmann::json solution = nullptr;
  if (r.solution) {
    solution = {{"grid_n", r.solution->grid_n()},
                {"a", r.solution->grid().front()},
                {"b", r.solution->grid().back()},
                {"values", r.solution->values()}};
  }
  j = {
      {"name", r.name},
      {"status", to_string(r.status)},
      {"message", r.message},
      {"hypotheses", r.hypotheses},
      {"density", optional(r.density)},
      {"sample_count", r.sample_count},
      {"max_depth", r.max_depth},
      {"conflict_count", r.conflict_count},
      {"max_conflict", r.max_conflict},
      {"conflicts", conflicts},
      {"gamma_consistency", r.gamma_consistency},
      {"rounding_budget_exceeded", r.rounding_budget_exceeded},
      {"residual_gamma", optional(r.residual_gamma)},
      {"residual_square", optional(r.residual_square)},
      {"boundary", optional(r.boundary)},
      {"overdetermined", r.overdetermined},
      {"solution", solution},
  };
}

}  // namespace feqlab
