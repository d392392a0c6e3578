#include <benchmark/benchmark.h>

#include "hessdamp/dynamics.hpp"
#include "hessdamp/experiment.hpp"
#include "hessdamp/optimizers.hpp"
#include "hessdamp/problems.hpp"

using namespace hessdamp;

static void BM_StepIaa(benchmark::State& state) {
  const Problem p = quadratic(std::vector<double>(state.range(0), 1.0));
  const AlgorithmConfig cfg{Variant::kIaa, 0.3, 0.2, 0.0, 1.0, {}};
  Point x = Point::Constant(state.range(0), 1.0), prev = x * 1.01;
  const Point eps = Point::Zero(state.range(0));
  for (auto _ : state) {
    Point next = step_iaa(p, cfg, x, prev, eps);
    prev = x;
    x = next;
    if (x.norm() < 1e-100) x.setConstant(1.0);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_StepIaa)->Arg(1)->Arg(16)->Arg(256);

static void BM_RunExample51(benchmark::State& state) {
  const Problem p = example51();
  const AlgorithmConfig cfg{Variant::kIaa, 0.3, 0.2, 0.0, 1.0 / 6.0, {}};
  const Point x0 = Point::Constant(1, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(p, cfg, x0, x0, {std::nullopt, state.range(0)}));
  }
}
BENCHMARK(BM_RunExample51)->Arg(100)->Arg(2000);

static void BM_Fig12(benchmark::State& state) {
  ExperimentConfig cfg = preset("fig12");
  cfg.emit.clear();
  for (auto _ : state) benchmark::DoNotOptimize(execute(cfg));
}
BENCHMARK(BM_Fig12);

static void BM_IntegrateExample51(benchmark::State& state) {
  const Problem p = example51();
  IntegrationOptions o;
  o.t_end = 10.0;
  o.record_every = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate(p, 1.0, 0.1, {}, Point::Constant(1, 3.0), Point::Zero(1), o));
  }
}
BENCHMARK(BM_IntegrateExample51)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
