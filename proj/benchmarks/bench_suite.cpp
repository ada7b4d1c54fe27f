#include <benchmark/benchmark.h>

#include "saddlecheck/verifier.hpp"

using namespace saddle;

namespace {
const solver::SaddleSolution& sol() {
  static const auto s =
      solver::newton_solve(forms::DimensionParams::from_m(4), solver::SolverConfig{}, solver::build_grid(12, 0.05));
  return s;
}
}  // namespace

static void BM_InequalitySuite(benchmark::State& state) {
  verifier::SuiteOptions opt;
  opt.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verifier::run_inequality_suite(sol(), opt));
}
BENCHMARK(BM_InequalitySuite)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

static void BM_Supersolution(benchmark::State& state) {
  const auto p = candidate::CandidateParams::for_n(8);
  for (auto _ : state) benchmark::DoNotOptimize(verifier::verify_supersolution(sol(), p));
}
BENCHMARK(BM_Supersolution)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
