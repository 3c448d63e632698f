#include "fixtures.hpp"

#include <atomic>
#include <chrono>
#include <unistd.h>

#include "oracles.hpp"

namespace steer::test {

namespace fs = std::filesystem;

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = fs::temp_directory_path() /
          ("steer-test-" + std::to_string(::getpid()) + "-" + std::to_string(stamp) + "-" +
           std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

const std::string& pima_csv() {
  static const std::string text = read_file(fixture_path("pima.csv"));
  return text;
}

const nlohmann::json& pima_schema_json() {
  static const nlohmann::json doc = nlohmann::json::parse(read_file(fixture_path("pima_schema.json")));
  return doc;
}

const Dataset& pima_dataset() {
  static const Dataset ds = ingest_csv(pima_csv(), SchemaDocument::from_json(pima_schema_json()));
  return ds;
}

const TrainResult& pima_trained() {
  static const TrainResult result = train(pima_dataset(), Hyperparameters{});
  return result;
}

nlohmann::json pima_feature_list() {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& f : pima_schema_json().at("features")) list.push_back(f.at("name"));
  return list;
}

Dataset numeric_dataset(const std::vector<std::vector<Cell>>& values, const std::vector<int>& labels) {
  std::vector<FeatureSpec> schema;
  const std::size_t n = values.empty() ? 1 : values.front().size();
  for (std::size_t j = 0; j < n; ++j) {
    FeatureSpec f;
    f.name = "f" + std::to_string(j);
    f.display_label = f.name;
    schema.push_back(f);
  }
  std::vector<Instance> rows;
  for (std::size_t r = 0; r < values.size(); ++r) rows.push_back({values[r], labels[r]});
  return Dataset(std::move(schema), TargetSpec{"y", {"0", "1"}}, std::move(rows));
}

}  // namespace steer::test
