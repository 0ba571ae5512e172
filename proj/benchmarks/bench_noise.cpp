#include <benchmark/benchmark.h>

#include "jumpsde/noise.hpp"

using namespace jumpsde;

static void BM_NextU64(benchmark::State& state) {
  NoiseStream stream(42, 0);
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_u64());
}
BENCHMARK(BM_NextU64);

static void BM_NextNormal(benchmark::State& state) {
  NoiseStream stream(42, 0);
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_normal());
}
BENCHMARK(BM_NextNormal);

static void BM_NextPoisson(benchmark::State& state) {
  NoiseStream stream(42, 0);
  const double mean = state.range(0) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_poisson(mean));
}
BENCHMARK(BM_NextPoisson)->Arg(1)->Arg(9)->Arg(200);  // mean 0.1 / 0.9 / 20

static void BM_BrownianIncrement(benchmark::State& state) {
  NoiseStream stream(42, 0);
  const int m = static_cast<int>(state.range(0));
  Vec out(m);
  for (auto _ : state) {
    brownian_increment(stream, 0.01, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_BrownianIncrement)->Arg(1)->Arg(4)->Arg(16);

BENCHMARK_MAIN();
