#include <fstream>
#include <sstream>

#include <benchmark/benchmark.h>
#include <nlohmann/json.hpp>

#include "bench_support.hpp"

namespace steer::bench {

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(STEER_FIXTURE_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const Dataset& pima() {
  static const Dataset ds = ingest_csv(
      slurp("pima.csv"), SchemaDocument::from_json(nlohmann::json::parse(slurp("pima_schema.json"))));
  return ds;
}

const TrainResult& pima_trained() {
  static const TrainResult t = train(pima(), Hyperparameters{});
  return t;
}

}  // namespace steer::bench

BENCHMARK_MAIN();
