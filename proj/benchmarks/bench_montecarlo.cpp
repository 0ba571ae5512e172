#include <benchmark/benchmark.h>

#include "jumpsde/montecarlo.hpp"
#include "jumpsde/problem.hpp"

using namespace jumpsde;

static void BM_EstimateSecondMoments(benchmark::State& state) {
  const LinearTestParams params{-1.0, 2.0, -0.9, 9.0};
  const auto problem = linear_problem(params, 1.0, 1.0);
  const long n_paths = state.range(0);
  const int n_threads = static_cast<int>(state.range(1));
  EstimateOptions options{.n_threads = n_threads};
  for (auto _ : state) {
    const auto series = estimate_second_moments(problem, Scheme::STS, 0.02, 50,
                                                n_paths, 42, options);
    benchmark::DoNotOptimize(series.points.data());
  }
  state.SetItemsProcessed(state.iterations() * n_paths * 50);
}
BENCHMARK(BM_EstimateSecondMoments)
    ->Args({1000, 1})
    ->Args({1000, 0})
    ->Args({10000, 1})
    ->Args({10000, 0});

BENCHMARK_MAIN();
