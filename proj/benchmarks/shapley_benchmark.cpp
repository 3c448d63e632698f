#include <benchmark/benchmark.h>

#include "bench_support.hpp"
#include "steer/random.hpp"
#include "steer/shapley.hpp"

namespace {

using namespace steer;

std::vector<std::vector<double>> background(std::size_t rows) {
  const Dataset& ds = bench::pima();
  auto rng = SplitMix64::derive(42, Stream::ExplainBackground);
  std::vector<std::vector<double>> out;
  for (auto r : sample_without_replacement(ds.size(), rows, rng)) out.push_back(to_dense(ds.rows()[r].values));
  return out;
}

void BM_ShapForest(benchmark::State& state) {
  const ModelArtifact& model = bench::pima_trained().model;
  const auto bg = background(static_cast<std::size_t>(state.range(0)));
  const auto x = to_dense(bench::pima().rows()[0].values);
  for (auto _ : state) {
    auto e = shap_exact_dense(model, x, bg);
    benchmark::DoNotOptimize(e.phi.data());
  }
}
BENCHMARK(BM_ShapForest)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ShapGenericEnumeration(benchmark::State& state) {
  const ModelArtifact& model = bench::pima_trained().model;
  const auto bg = background(static_cast<std::size_t>(state.range(0)));
  const auto x = to_dense(bench::pima().rows()[0].values);
  for (auto _ : state) {
    auto e = detail::shap_enumerate([&](const double* r) { return model.positive_proba(r); }, x, bg);
    benchmark::DoNotOptimize(e.phi.data());
  }
}
BENCHMARK(BM_ShapGenericEnumeration)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GlobalImportance(benchmark::State& state) {
  const ModelArtifact& model = bench::pima_trained().model;
  for (auto _ : state) {
    auto g = global_importance(model, bench::pima(), static_cast<std::size_t>(state.range(0)), 42);
    benchmark::DoNotOptimize(g.mean_base_value);
  }
}
BENCHMARK(BM_GlobalImportance)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
