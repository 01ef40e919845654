#include <benchmark/benchmark.h>

#include "kpplab/fronts.hpp"
#include "kpplab/levelsets.hpp"
#include "kpplab/profile.hpp"
#include "kpplab/solver.hpp"

using namespace kpplab;

namespace {

InitialProfile algebraic_profile() {
  TailSpec tail;
  tail.family = TailFamily::algebraic;
  tail.alpha = 2.0;
  tail.C = 1.0;
  return InitialProfile::make(tail, 0.9,
                              InitialProfile::default_x_blend(tail, 0.9, 2.0), 2.0);
}

void BM_strang_step(benchmark::State& state) {
  const InitialProfile p = algebraic_profile();
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  Grid g = Grid::stretched_with_uniform_head(0.0, p.x_blend() + 10.0, 1e4, 0.04, 1.0);
  CauchyState s = make_initial_state(p, nl, g);
  for (auto _ : state) {
    strang_step(s, nl, 1e-3);
    benchmark::DoNotOptimize(s.u.data());
  }
  state.SetItemsProcessed(state.iterations() * s.u.size());
}
BENCHMARK(BM_strang_step);

void BM_profile_evaluate(benchmark::State& state) {
  const InitialProfile p = algebraic_profile();
  double x = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.value(x));
    x = x < 1e6 ? x * 1.01 : 1.0;
  }
}
BENCHMARK(BM_profile_evaluate);

void BM_extract_crossings(benchmark::State& state) {
  const InitialProfile p = algebraic_profile();
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  Grid g = Grid::stretched_with_uniform_head(0.0, p.x_blend() + 10.0, 1e4, 0.04, 1.0);
  CauchyState s = make_initial_state(p, nl, g);
  for (auto _ : state) {
    const Crossing c = extract_crossings(s.grid.nodes(), s.u, 0.5);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_extract_crossings);

void BM_front_solve(benchmark::State& state) {
  const Nonlinearity nl = Nonlinearity::logistic(1.0);
  for (auto _ : state) {
    const FrontProfile fp = solve_front(nl, 2.5, 1e-2);
    benchmark::DoNotOptimize(fp.max_residual);
  }
}
BENCHMARK(BM_front_solve);

}  // namespace

BENCHMARK_MAIN();
