#include "steer/surrogate.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "steer/error.hpp"

namespace steer {

using nlohmann::json;

bool DecisionRule::matches(const Instance& row) const noexcept {
  return std::all_of(conditions.begin(), conditions.end(),
                     [&](const RuleCondition& c) { return c.holds(row.values[c.feature_index]); });
}

json DecisionRule::to_json() const {
  json conds = json::array();
  for (const auto& c : conditions) {
    conds.push_back({{"feature", c.feature},
                     {"op", c.op == ConditionOp::LessEqual ? "<=" : ">"},
                     {"threshold", c.threshold},
                     {"missing_included", c.missing_included}});
  }
  return {{"conditions", std::move(conds)},
          {"predicted_label", predicted_label},
          {"predicted_class", predicted_class},
          {"support", support},
          {"coverage", coverage},
          {"confidence", confidence},
          {"score", score}};
}

namespace {

struct Bounds {
  std::optional<double> lo;  // value > lo
  std::optional<double> hi;  // value <= hi
  bool missing_ok = true;
  bool touched = false;
};

struct PathRule {
  DecisionRule rule;
  std::size_t leaf_order = 0;
};

void collect(const DecisionTree& tree, int index, std::vector<Bounds>& bounds, const Dataset& ds,
             std::vector<PathRule>& out) {
  const TreeNode& node = tree.nodes()[static_cast<std::size_t>(index)];
  if (node.is_leaf()) {
    PathRule pr;
    pr.leaf_order = out.size();
    for (std::size_t j = 0; j < bounds.size(); ++j) {
      const Bounds& b = bounds[j];
      if (!b.touched) continue;
      const auto& name = ds.schema()[j].name;
      if (b.lo) pr.rule.conditions.push_back({name, j, ConditionOp::Greater, *b.lo, b.missing_ok});
      if (b.hi) pr.rule.conditions.push_back({name, j, ConditionOp::LessEqual, *b.hi, b.missing_ok});
    }
    pr.rule.predicted_label = argmax(node.proba);
    pr.rule.predicted_class = ds.target().labels[static_cast<std::size_t>(pr.rule.predicted_label)];
    out.push_back(std::move(pr));
    return;
  }
  const auto j = static_cast<std::size_t>(node.feature);
  const Bounds saved = bounds[j];

  bounds[j].touched = true;
  bounds[j].hi = saved.hi ? std::min(*saved.hi, node.threshold) : node.threshold;
  bounds[j].missing_ok = saved.missing_ok && node.missing_left;
  collect(tree, node.left, bounds, ds, out);
  bounds[j] = saved;

  bounds[j].touched = true;
  bounds[j].lo = saved.lo ? std::max(*saved.lo, node.threshold) : node.threshold;
  bounds[j].missing_ok = saved.missing_ok && !node.missing_left;
  collect(tree, node.right, bounds, ds, out);
  bounds[j] = saved;
}

}  // namespace

SurrogateResult surrogate_rules(const ModelArtifact& model, const Dataset& ds,
                                const SurrogateOptions& options) {
  if (ds.size() == 0) throw Error(ErrorCode::EmptyDataset, "surrogate needs a non-empty dataset");
  if (ds.feature_names() != model.feature_names) {
    throw Error(ErrorCode::SchemaMismatch, "dataset features differ from model features");
  }

  const FeatureMatrix x(ds);
  std::vector<int> model_labels(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto row = x.row(r);
    model_labels[r] = argmax(model.proba(row.data()));
  }

  std::vector<std::uint32_t> sample(ds.size());
  std::iota(sample.begin(), sample.end(), 0U);
  GrowOptions grow;
  grow.max_depth = options.max_depth;
  grow.min_leaf = options.min_leaf;
  grow.features_per_split = ds.n_features();

  SurrogateResult result;
  result.tree = grow_tree(x, model_labels, std::move(sample), grow, nullptr);

  std::size_t agree = 0;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto row = x.row(r);
    agree += static_cast<std::size_t>(argmax(result.tree.predict(row.data())) == model_labels[r]);
  }
  result.fidelity = static_cast<double>(agree) / static_cast<double>(ds.size());

  std::vector<Bounds> bounds(ds.n_features());
  std::vector<PathRule> paths;
  collect(result.tree, 0, bounds, ds, paths);
  result.total_rules = paths.size();

  const auto n = static_cast<double>(ds.size());
  for (auto& pr : paths) {
    auto& rule = pr.rule;
    std::size_t covered = 0, confirmed = 0;
    for (std::size_t r = 0; r < ds.size(); ++r) {
      if (!rule.matches(ds.rows()[r])) continue;
      ++covered;
      confirmed += static_cast<std::size_t>(model_labels[r] == rule.predicted_label);
    }
    rule.support = covered;
    rule.coverage = static_cast<double>(covered) / n;
    rule.confidence = covered > 0 ? static_cast<double>(confirmed) / static_cast<double>(covered) : 0.0;
    rule.score = rule.coverage * rule.confidence;
  }

  auto first_feature = [](const DecisionRule& r) -> long {
    return r.conditions.empty() ? -1 : static_cast<long>(r.conditions.front().feature_index);
  };
  std::sort(paths.begin(), paths.end(), [&](const PathRule& a, const PathRule& b) {
    if (a.rule.score != b.rule.score) return a.rule.score > b.rule.score;
    if (a.rule.coverage != b.rule.coverage) return a.rule.coverage > b.rule.coverage;
    if (first_feature(a.rule) != first_feature(b.rule)) return first_feature(a.rule) < first_feature(b.rule);
    return a.leaf_order < b.leaf_order;
  });
  if (paths.size() > options.top_rules) paths.resize(options.top_rules);
  for (auto& pr : paths) result.rules.push_back(std::move(pr.rule));
  return result;
}

}  // namespace steer
