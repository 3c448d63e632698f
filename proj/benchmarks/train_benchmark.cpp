#include <benchmark/benchmark.h>

#include "bench_support.hpp"

namespace {

using namespace steer;

void BM_TrainPima(benchmark::State& state) {
  const Dataset& ds = bench::pima();
  Hyperparameters hp;
  hp.n_trees = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto result = train(ds, hp);
    benchmark::DoNotOptimize(result.metrics.holdout_accuracy);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainPima)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_PredictPima(benchmark::State& state) {
  const Dataset& ds = bench::pima();
  const ModelArtifact& model = bench::pima_trained().model;
  for (auto _ : state) {
    int positives = 0;
    for (const auto& row : ds.rows()) positives += argmax(predict_proba(model, row.values));
    benchmark::DoNotOptimize(positives);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ds.size()));
}
BENCHMARK(BM_PredictPima)->Unit(benchmark::kMicrosecond);

void BM_Ingest(benchmark::State& state) {
  const Dataset& ds = bench::pima();
  const std::string csv = to_csv(ds);
  const SchemaDocument schema{ds.schema(), ds.target()};
  for (auto _ : state) {
    auto parsed = ingest_csv(csv, schema);
    benchmark::DoNotOptimize(parsed.snapshot_id());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(csv.size()));
}
BENCHMARK(BM_Ingest)->Unit(benchmark::kMillisecond);

}  // namespace
