#include <benchmark/benchmark.h>

#include "saddlecheck/solver.hpp"

using namespace saddle::solver;

static void BM_NewtonSolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const double h = state.range(1) / 100.0;
  const Grid g = build_grid(12, h);
  for (auto _ : state) benchmark::DoNotOptimize(newton_solve(DimensionParams::from_m(m), SolverConfig{}, g));
  state.counters["unknowns"] = g.unknown_count();
}
BENCHMARK(BM_NewtonSolve)->Args({1, 10})->Args({4, 10})->Args({4, 5})->Unit(benchmark::kMillisecond);

static void BM_ApplyOperator(benchmark::State& state) {
  const Grid g = build_grid(12, 0.05);
  const SaddleSolution sol = newton_solve(DimensionParams::from_m(4), SolverConfig{}, g);
  for (auto _ : state) benchmark::DoNotOptimize(apply_operator(sol.u, sol.params, g));
}
BENCHMARK(BM_ApplyOperator)->Unit(benchmark::kMicrosecond);

static void BM_ComputeDerivatives(benchmark::State& state) {
  const SaddleSolution sol = newton_solve(DimensionParams::from_m(4), SolverConfig{}, build_grid(12, 0.05));
  for (auto _ : state) benchmark::DoNotOptimize(compute_derivatives(sol));
}
BENCHMARK(BM_ComputeDerivatives)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
