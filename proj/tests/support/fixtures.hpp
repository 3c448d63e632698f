#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "steer/dataset.hpp"
#include "steer/forest.hpp"

namespace steer::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

const std::string& pima_csv();
const nlohmann::json& pima_schema_json();
const Dataset& pima_dataset();
/// Pima trained once with default hyperparameters.
const TrainResult& pima_trained();

/// All Pima feature names, schema order.
nlohmann::json pima_feature_list();

/// Builds a dataset of numeric features f0..f{n-1} with labels "0"/"1".
Dataset numeric_dataset(const std::vector<std::vector<Cell>>& values, const std::vector<int>& labels);

}  // namespace steer::test
