#include <benchmark/benchmark.h>

#include "saddlecheck/catalog.hpp"

using namespace saddle::rigor;

static void BM_CoefficientClaim(benchmark::State& state) {
  const ClaimSpec c = coefficient_claim(state.range(0) == 0 ? "C_s" : "C_st", 8);
  for (auto _ : state) benchmark::DoNotOptimize(prove_nonpositive(c.tape, c.box, c.options, c.id));
}
BENCHMARK(BM_CoefficientClaim)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_UpperBound(benchmark::State& state) {
  const ClaimSpec c = defect_claim(4);
  const Box box = {Interval(0.2, 0.21), Interval(1.0, 1.1), Interval(0.5, 0.6)};
  for (auto _ : state) benchmark::DoNotOptimize(upper_bound(c.tape, box));
}
BENCHMARK(BM_UpperBound)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
