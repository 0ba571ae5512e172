#include <benchmark/benchmark.h>

#include "jumpsde/noise.hpp"
#include "jumpsde/problem.hpp"
#include "jumpsde/schemes.hpp"

using namespace jumpsde;

namespace {

// Scalar cubic-decay problem in split form: u = -0.12 x, v = -x^3.
JumpDiffusionProblem cubic_problem() {
  return JumpDiffusionProblem::with_split_drift(
      1, 1, [](const Vec& x, Vec& out) { out = -0.12 * x; },
      [](const Vec& x, Vec& out) { out = -x.array().cube().matrix(); },
      [](const Vec& x, Mat& out) { out = 0.1 * x; },
      [](const Vec& x, Vec& out) { out = -0.1 * x; }, 1.0, Vec::Constant(1, 1.0),
      1e9);
}

Increment unit_increment() {
  Increment inc;
  inc.dt = 0.01;
  inc.dW = Vec::Constant(1, 0.05);
  inc.dN = 0;
  return inc;
}

void bench_step(benchmark::State& state, Scheme scheme) {
  const auto problem = cubic_problem();
  const auto inc = unit_increment();
  Vec x = Vec::Constant(1, 0.9);
  for (auto _ : state) {
    x = step_scheme(problem, scheme, x, inc);
    benchmark::DoNotOptimize(x.data());
  }
}

}  // namespace

static void BM_StepEM(benchmark::State& state) { bench_step(state, Scheme::EM); }
static void BM_StepNCTS(benchmark::State& state) { bench_step(state, Scheme::NCTS); }
static void BM_StepSTS(benchmark::State& state) { bench_step(state, Scheme::STS); }
static void BM_StepBE(benchmark::State& state) { bench_step(state, Scheme::BE); }
static void BM_StepSSBE(benchmark::State& state) { bench_step(state, Scheme::SSBE); }
BENCHMARK(BM_StepEM);
BENCHMARK(BM_StepNCTS);
BENCHMARK(BM_StepSTS);
BENCHMARK(BM_StepBE);
BENCHMARK(BM_StepSSBE);

static void BM_SimulatePath(benchmark::State& state) {
  const auto problem = cubic_problem();
  const long n_steps = state.range(0);
  std::uint64_t path = 0;
  for (auto _ : state) {
    NoiseStream stream(42, path++);
    const auto traj = simulate_path(problem, Scheme::STS, 0.01, n_steps, stream);
    benchmark::DoNotOptimize(traj.states.data());
  }
  state.SetItemsProcessed(state.iterations() * n_steps);
}
BENCHMARK(BM_SimulatePath)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
