#include <benchmark/benchmark.h>

#include "bench_support.hpp"
#include "steer/bundle.hpp"
#include "steer/corrections.hpp"
#include "steer/surrogate.hpp"

namespace {

using namespace steer;

void BM_BuildBundle(benchmark::State& state) {
  const auto& t = bench::pima_trained();
  for (auto _ : state) {
    auto b = build_bundle(t.model, t.metrics, bench::pima(), std::nullopt);
    benchmark::DoNotOptimize(b.surrogate_fidelity);
  }
}
BENCHMARK(BM_BuildBundle)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_BundleSerialize(benchmark::State& state) {
  const auto& t = bench::pima_trained();
  const auto b = build_bundle(t.model, t.metrics, bench::pima(), std::nullopt);
  for (auto _ : state) {
    auto bytes = b.canonical_bytes();
    benchmark::DoNotOptimize(bytes.data());
  }
}
BENCHMARK(BM_BundleSerialize)->Unit(benchmark::kMicrosecond);

void BM_Surrogate(benchmark::State& state) {
  const auto& t = bench::pima_trained();
  for (auto _ : state) {
    auto r = surrogate_rules(t.model, bench::pima());
    benchmark::DoNotOptimize(r.fidelity);
  }
}
BENCHMARK(BM_Surrogate)->Unit(benchmark::kMillisecond);

void BM_DetectIssues(benchmark::State& state) {
  Hyperparameters hp;
  hp.n_trees = 20;
  for (auto _ : state) {
    auto issues = detect_issues(bench::pima(), hp);
    benchmark::DoNotOptimize(issues.size());
  }
}
BENCHMARK(BM_DetectIssues)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace
