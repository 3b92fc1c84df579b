#include "feqlab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "net.hpp"

namespace feqlab {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::solved: return "solved";
    case SolveStatus::no_net: return "no-net";
    case SolveStatus::conflicts: return "conflicts";
    case SolveStatus::hypotheses_failed: return "hypotheses-failed";
    case SolveStatus::evaluation_error: return "evaluation-error";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// SampleTable

std::size_t SampleTable::max_depth() const {
  std::size_t depth = 0;
  for (const auto& s : samples) depth = std::max(depth, s.depth());
  return depth;
}

std::optional<std::size_t> SampleTable::find(double point) const {
  auto it = std::lower_bound(samples.begin(), samples.end(), point,
                             [](const Sample& s, double p) { return s.point < p; });
  std::optional<std::size_t> best;
  double best_dist = delta_dup;
  if (it != samples.end() && it->point - point <= best_dist) {
    best_dist = it->point - point;
    best = static_cast<std::size_t>(it - samples.begin());
  }
  if (it != samples.begin()) {
    auto prev = std::prev(it);
    if (point - prev->point <= best_dist) best = static_cast<std::size_t>(prev - samples.begin());
  }
  return best;
}

double SampleTable::interpolate(double z) const {
  if (z <= samples.front().point) return samples.front().value;
  if (z >= samples.back().point) return samples.back().value;
  auto it = std::upper_bound(samples.begin(), samples.end(), z,
                             [](double p, const Sample& s) { return p < s.point; });
  const Sample& hi = *it;
  const Sample& lo = *std::prev(it);
  if (lo.point == z) return lo.value;
  const double t = (z - lo.point) / (hi.point - lo.point);
  return lo.value + (hi.value - lo.value) * t;
}

std::vector<double> SampleTable::points() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.point);
  return out;
}

std::vector<double> SampleTable::values() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.value);
  return out;
}

// ---------------------------------------------------------------------------
// Propagation

namespace {

struct Step {
  double point;
  double value;
};

class Propagator {
 public:
  Propagator(const Problem& problem) : p_(problem) {}

  // child_1 = (F(a,z), H[A, f(z), a, z]); child_2 = (F(z,b), H[f(z), B, z, b]).
  Step child(int map, double z, double fz, const Word& word) const {
    const auto& I = p_.interval;
    const double a = I.a();
    const double b = I.b();
    try {
      const std::array<double, 2> xy =
          map == 1 ? std::array{a, z} : std::array{z, b};
      const double point = eval(p_.f, xy);
      if (!I.contains(point, kBoxTolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "F maps " << z << " outside the interval at word '" << word << map << "'";
        throw PropagationError(os.str(), z, word);
      }
      const std::array<double, 4> uvxy =
          map == 1 ? std::array{p_.boundary_a, fz, a, z}
                   : std::array{fz, p_.boundary_b, z, b};
      return {std::clamp(point, a, b), eval(p_.h, uvxy)};
    } catch (const ExprError& e) {
      std::ostringstream os;
      os.precision(17);
      os << "propagation failed at z = " << z << " (word '" << word << "', map " << map
         << "): " << e.what();
      throw PropagationError(os.str(), z, word);
    }
  }

 private:
  const Problem& p_;
};

}  // namespace

SampleTable propagate(const Problem& problem, const PropagateOptions& options) {
  if (!(options.delta_dup > 0.0) || !(options.epsilon > options.delta_dup)) {
    throw InvalidArgument("propagate: epsilon > delta_dup > 0 required");
  }
  if (options.max_nodes < 2) throw InvalidArgument("propagate: max_nodes must be at least 2");
  if (!(options.tol_val >= 0.0)) throw InvalidArgument("propagate: tol_val must be non-negative");

  const auto& I = problem.interval;
  const Propagator step(problem);
  const std::array<int, 2> maps =
      options.map_order == MapOrder::map1_first ? std::array{1, 2} : std::array{2, 1};

  SampleTable table;
  table.delta_dup = options.delta_dup;
  std::vector<Sample> found;
  detail::NetBuilder net(I, options.delta_dup);
  std::vector<std::size_t> frontier;

  auto record_conflict = [&](std::size_t incumbent, const Sample& candidate) {
    const double diff = std::abs(found[incumbent].value - candidate.value);
    table.max_conflict = std::max(table.max_conflict, diff);
    if (diff <= options.tol_val) return;
    ++table.conflict_count;
    if (table.conflicts.size() < SampleTable::kConflictLogLimit) {
      table.conflicts.push_back({found[incumbent].point, found[incumbent].value,
                                 candidate.value, diff, found[incumbent].word,
                                 candidate.word});
    }
  };
  // Returns false once the node budget is exhausted.
  auto offer = [&](Sample s, std::vector<std::size_t>& next) {
    if (auto near = net.find_near(s.point)) {
      record_conflict(*near, s);
      return true;
    }
    if (found.size() >= options.max_nodes) return false;
    net.insert(s.point, found.size());
    next.push_back(found.size());
    found.push_back(std::move(s));
    return true;
  };

  Sample seed_a{I.a(), problem.boundary_a, {}, Sample::kNoParent};
  Sample seed_b{I.b(), problem.boundary_b, {}, Sample::kNoParent};
  if (options.seed_order == SeedOrder::b_first) std::swap(seed_a, seed_b);
  offer(seed_a, frontier);
  offer(seed_b, frontier);

  bool budget_left = true;
  bool done = net.largest_gap() <= options.epsilon;
  while (!done && budget_left && !frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (int map : maps) {
        const Sample& parent = found[idx];
        const Step s = step.child(map, parent.point, parent.value, parent.word);
        Word word = parent.word;
        word.push_back(static_cast<char>('0' + map));
        if (!offer(Sample{s.point, s.value, std::move(word), idx}, next)) {
          budget_left = false;
          break;
        }
        if (net.largest_gap() <= options.epsilon) {
          done = true;
          break;
        }
      }
      if (done || !budget_left) break;
    }
    frontier = std::move(next);
  }
  table.net_complete = done;
  table.largest_gap = net.largest_gap();

  // Recheck every derivation against its parent.
  for (const auto& s : found) {
    if (s.parent == Sample::kNoParent) continue;
    const Sample& parent = found[s.parent];
    const int map = s.word.back() - '0';
    const Step again = step.child(map, parent.point, parent.value, parent.word);
    const double err = std::abs(again.value - s.value);
    table.gamma_consistency = std::max(table.gamma_consistency, err);
    if (err > 1e-12 * static_cast<double>(s.depth())) table.rounding_budget_exceeded = true;
  }

  std::vector<std::size_t> order(found.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return found[l].point < found[r].point; });
  std::vector<std::size_t> rank(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  table.samples.reserve(found.size());
  for (std::size_t i : order) {
    Sample s = std::move(found[i]);
    if (s.parent != Sample::kNoParent) s.parent = rank[s.parent];
    table.samples.push_back(std::move(s));
  }
  return table;
}

TabulatedFunction reconstruct(const SampleTable& samples, std::size_t grid_n) {
  if (samples.samples.size() < 2) {
    throw InvalidArgument("reconstruct: both endpoint samples are required");
  }
  if (grid_n < 1) throw InvalidArgument("reconstruct: grid_n must be at least 1");
  const Interval domain(samples.samples.front().point, samples.samples.back().point);
  std::vector<double> values(grid_n + 1);
  for (std::size_t i = 0; i <= grid_n; ++i) {
    const double z = grid_point(domain, i, grid_n);
    if (auto hit = samples.find(z)) {
      values[i] = samples.samples[*hit].value;
    } else {
      values[i] = samples.interpolate(z);
    }
  }
  return TabulatedFunction::uniform(domain, std::move(values));
}

// ---------------------------------------------------------------------------
// Pipeline

SolveOptions SolveOptions::defaults_for(const Problem& problem) {
  SolveOptions o;
  o.epsilon = 1e-3 * problem.interval.length();
  o.delta_dup = o.epsilon * 1e-6;
  o.tol_val = 1e-7 * problem.value_scale();
  o.witness_tol = 1e-9 * problem.interval.length();
  return o;
}

void SolveOptions::validate() const {
  if (!(delta_dup > 0.0) || !(epsilon > delta_dup)) {
    throw InvalidArgument("options: epsilon > delta_dup > 0 required");
  }
  if (grid_n < 1) throw InvalidArgument("options: grid_n must be at least 1");
  if (max_nodes < 2) throw InvalidArgument("options: max_nodes must be at least 2");
  if (!(tol_val >= 0.0)) throw InvalidArgument("options: tol_val must be non-negative");
}

SolveReport solve(const Problem& problem, const SolveOptions& options) {
  options.validate();
  SolveReport report;
  report.name = problem.name;

  HypothesisConfig hc;
  // Grid checks need at least a 2-cell grid.
  hc.grid_n = std::max<std::size_t>(options.grid_n, 2);
  hc.epsilon = std::min(options.epsilon, problem.interval.length());
  hc.witness_tol = options.witness_tol;
  hc.margin = options.margin;
  report.hypotheses = run_all(problem, hc);
  if (!report.hypotheses.all_ok()) {
    report.status = SolveStatus::hypotheses_failed;
    report.message = "hypotheses not satisfied; the solver does not apply";
    return report;
  }

  const auto& slices = report.hypotheses.slice_contraction;
  DensityCertificate cert;
  cert.epsilon = options.epsilon;
  cert.c1 = slices.c1;
  cert.c2 = slices.c2;
  cert.c_eps = std::max(slices.c1, slices.c2);
  cert.depth_bound = mixing_depth(cert.c_eps, problem.interval.length(), options.epsilon);

  SampleTable table;
  try {
    table = propagate(problem, PropagateOptions{options.epsilon, options.max_nodes,
                                                options.delta_dup, options.tol_val,
                                                options.map_order, options.seed_order});
  } catch (const PropagationError& e) {
    report.status = SolveStatus::evaluation_error;
    report.message = e.what();
    return report;
  }
  cert.achieved_gap = table.largest_gap;
  report.density = cert;
  report.sample_count = table.samples.size();
  report.max_depth = table.max_depth();
  report.conflict_count = table.conflict_count;
  report.max_conflict = table.max_conflict;
  report.conflicts = table.conflicts;
  report.gamma_consistency = table.gamma_consistency;
  report.rounding_budget_exceeded = table.rounding_budget_exceeded;

  report.solution = reconstruct(table, options.grid_n);
  report.boundary = check_boundary(*report.solution, problem, options.tol_val);
  try {
    report.residual_gamma =
        residual_on_gamma(*report.solution, problem, options.grid_n, &table);
    report.residual_square =
        residual_on_square(*report.solution, problem, options.grid_n, &table);
  } catch (const EvaluationError& e) {
    report.status = SolveStatus::evaluation_error;
    report.message = e.what();
    return report;
  }

  if (!table.net_complete) {
    report.status = SolveStatus::no_net;
    std::ostringstream os;
    os.precision(17);
    os << "node budget exhausted: largest gap " << table.largest_gap << " > epsilon "
       << options.epsilon;
    report.message = os.str();
  } else if (table.max_conflict > options.tol_val) {
    report.status = SolveStatus::conflicts;
    std::ostringstream os;
    os.precision(17);
    os << table.conflict_count << " conflicting derivation(s); max |difference| "
       << table.max_conflict << " > tol_val " << options.tol_val;
    report.message = os.str();
  } else {
    report.status = SolveStatus::solved;
    report.overdetermined = is_overdetermined(*report.residual_gamma,
                                              *report.residual_square,
                                              problem.value_scale());
    if (report.overdetermined) {
      report.message = "overdetermined instance: Gamma-solvable, I^2-unsolvable";
    }
  }
  return report;
}

}  // namespace feqlab
