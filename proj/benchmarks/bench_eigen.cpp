#include <benchmark/benchmark.h>

#include "saddlecheck/spectral.hpp"

using namespace saddle;

static void BM_MinEigenvalue(benchmark::State& state) {
  const double h = state.range(0) / 100.0;
  const auto sol = solver::newton_solve(forms::DimensionParams::from_m(2), solver::SolverConfig{},
                                        solver::build_grid(16, h));
  const auto a = spectral::assemble(sol);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::min_eigenvalue(a));
  state.counters["unknowns"] = a.size();
}
BENCHMARK(BM_MinEigenvalue)->Arg(20)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_DenseOracle(benchmark::State& state) {
  const auto sol = solver::newton_solve(forms::DimensionParams::from_m(2), solver::SolverConfig{},
                                        solver::build_grid(8, 0.2));
  const auto a = spectral::assemble(sol);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::dense_min_eigenvalue(a));
}
BENCHMARK(BM_DenseOracle)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
