#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "steer/forest.hpp"
#include "steer/random.hpp"

namespace steer::test {

using RowScore = std::function<double(const std::vector<double>&)>;

/// Shapley values by averaging marginal contributions over all n!
/// orderings, with the interventional value function evaluated directly.
/// Shares no code with the engine's subset formula.
std::vector<double> permutation_shapley(const RowScore& score, const std::vector<double>& x,
                                        const std::vector<std::vector<double>>& background);

/// Mean of score(x_S, b_rest) over the background, S given as a bool vector.
double coalition_value(const RowScore& score, const std::vector<double>& x,
                       const std::vector<std::vector<double>>& background, const std::vector<bool>& in_s);

/// Random CART-shaped tree over `n_features` with leaves holding random
/// class distributions. Depth is at most `max_depth`.
DecisionTree random_tree(std::size_t n_features, int max_depth, SplitMix64& rng);

/// A forest of `n_trees` random trees, wrapped as a model artifact.
ModelArtifact random_forest_model(std::size_t n_features, std::size_t n_trees, int max_depth, SplitMix64& rng);

/// Wraps hand-built trees as a model over features f0..f{n-1}.
ModelArtifact model_from_trees(std::size_t n_features, std::vector<DecisionTree> trees);

/// Column statistics read straight from CSV text by splitting lines on
/// commas; no quoting support, no schema.
struct CsvScan {
  std::vector<std::string> header;
  std::size_t data_rows = 0;
  /// Per column: cells whose text parses to exactly 0.
  std::vector<std::size_t> zero_cells;
  /// Per column: empty cells.
  std::vector<std::size_t> empty_cells;
  /// Distinct text values of the last column and their counts.
  std::vector<std::pair<std::string, std::size_t>> last_column_counts;
};

CsvScan scan_csv_lines(const std::string& text);

std::string read_file(const std::string& path);
std::string fixture_path(const std::string& name);
std::string schema_path(const std::string& name);

}  // namespace steer::test
