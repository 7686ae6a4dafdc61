// Serial vs OpenMP batch evaluation over a synthetic sweep.
#include <benchmark/benchmark.h>

#include "chipcost/explorer.hpp"
#include "chipcost/techdb.hpp"

namespace {

using namespace chipcost;

const TechDatabase& dataset() {
  static const TechDatabase db = load_dataset(default_dataset_path());
  return db;
}

std::vector<SystemSpec> systems(std::size_t scales) {
  SweepSpec spec;
  for (std::size_t i = 0; i < scales; ++i) spec.scales.push_back(2.0 + 0.5 * static_cast<double>(i));
  spec.io_fractions = {0.0, 0.3, 0.5};
  spec.die_counts = {1, 2, 4, 8};
  spec.node_pairs = {{"7nm", "7nm"}, {"7nm", "12nm"}, {"5nm", "16nm"}};
  spec.integrations = {Integration::silicon_2p5d, Integration::organic_2p5d, Integration::mcm};
  std::vector<SystemSpec> out;
  for (const auto& p : enumerate_points(spec)) out.push_back(build_point_system(p, spec, dataset()));
  return out;
}

void BM_BatchSerial(benchmark::State& state) {
  const auto batch = systems(static_cast<std::size_t>(state.range(0)));
  const Evaluator evaluator(dataset());
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch_serial(batch, evaluator));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(batch.size()));
}

void BM_BatchParallel(benchmark::State& state) {
  const auto batch = systems(static_cast<std::size_t>(state.range(0)));
  const Evaluator evaluator(dataset());
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch_parallel(batch, evaluator));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(batch.size()));
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(8)->Arg(64)->UseRealTime();
BENCHMARK(BM_BatchParallel)->Arg(8)->Arg(64)->UseRealTime();

BENCHMARK_MAIN();
