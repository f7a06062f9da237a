#include <benchmark/benchmark.h>

#include "ranpower/calibration.hpp"
#include "ranpower/fixtures.hpp"
#include "ranpower/planner.hpp"

namespace {

const ranpower::ModelBundle& bundle() {
  static const auto b = ranpower::calibrate_from_dataset(ranpower::embedded_fixtures()).bundle;
  return b;
}

const ranpower::Inventory& inventory() {
  static const auto inv = ranpower::fixture_inventory();
  return inv;
}

void BM_EvaluateSerial(benchmark::State& state) {
  const ranpower::CandidateSpace space(inventory());
  const double demand = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto evals = ranpower::evaluate_candidates_serial(space, demand, bundle());
    benchmark::DoNotOptimize(evals.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(space.size()));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const ranpower::CandidateSpace space(inventory());
  const double demand = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto evals = ranpower::evaluate_candidates_parallel(space, demand, bundle());
    benchmark::DoNotOptimize(evals.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(space.size()));
}

void BM_PlanSerial(benchmark::State& state) {
  for (auto _ : state) {
    auto plan = ranpower::plan_min_power(500.0, inventory(), bundle(), {}, ranpower::Execution::Serial);
    benchmark::DoNotOptimize(plan.predicted.system_total);
  }
}

void BM_PlanParallel(benchmark::State& state) {
  for (auto _ : state) {
    auto plan = ranpower::plan_min_power(500.0, inventory(), bundle(), {}, ranpower::Execution::Parallel);
    benchmark::DoNotOptimize(plan.predicted.system_total);
  }
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlanParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
