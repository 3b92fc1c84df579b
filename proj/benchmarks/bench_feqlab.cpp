#include <benchmark/benchmark.h>

#include <cmath>

#include "feqlab/dynsys.hpp"
#include "feqlab/solver.hpp"
#include "feqlab/verify.hpp"

namespace {

using namespace feqlab;

void BM_EvalBySlot(benchmark::State& state) {
  const Expr h = parse("0.25*u + 0.25*v + 0.5*x*y + logmean(1 + x, 1 + y)", h_variables());
  double slots[] = {0.1, 0.2, 0.3, 0.4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(h, slots));
    slots[0] += 1e-9;
  }
}
BENCHMARK(BM_EvalBySlot);

void BM_OrbitExpand(benchmark::State& state) {
  const auto sys = make_system(parse("logmean(x, y)", f_variables()), Interval(1.0, 2.0));
  const double eps = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto table = orbit_expand(sys, 1.0, eps, 1u << 22, eps * 1e-6);
    benchmark::DoNotOptimize(table.nodes.data());
  }
}
BENCHMARK(BM_OrbitExpand)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  const auto p = make_problem("q", "0.5*x + 0.5*y", "0.25*u + 0.25*v + 0.5*x*y", 0, 1, 0, 1);
  PropagateOptions opt;
  opt.epsilon = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  opt.delta_dup = opt.epsilon * 1e-6;
  for (auto _ : state) {
    auto table = propagate(p, opt);
    benchmark::DoNotOptimize(table.samples.data());
  }
}
BENCHMARK(BM_Propagate)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);

void BM_ResidualOnSquare(benchmark::State& state) {
  const auto p = make_problem("q", "0.5*x + 0.5*y", "0.25*u + 0.25*v + 0.5*x*y", 0, 1, 0, 1);
  const auto f = tabulate(parse("z^2", closed_form_variables()), p.interval, 1000);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(residual_on_square(f, p, n).sup);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>((n + 1) * (n + 1)));
}
BENCHMARK(BM_ResidualOnSquare)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
