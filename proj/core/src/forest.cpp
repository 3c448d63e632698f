#include "steer/forest.hpp"

#include <algorithm>
#include <cmath>

#include "steer/canonical_json.hpp"
#include "steer/error.hpp"

namespace steer {

using nlohmann::json;

void Hyperparameters::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::InvalidHyperparameters, what);
  };
  if (n_trees < 1) fail("n_trees must be >= 1");
  if (max_depth < 1) fail("max_depth must be >= 1");
  if (min_leaf < 1) fail("min_leaf must be >= 1");
  if (!(feature_subsample > 0.0 && feature_subsample <= 1.0)) fail("feature_subsample must be in (0, 1]");
}

json Hyperparameters::to_json() const {
  return {{"n_trees", n_trees},
          {"max_depth", max_depth},
          {"min_leaf", min_leaf},
          {"feature_subsample", feature_subsample},
          {"seed", seed}};
}

Hyperparameters Hyperparameters::from_json(const json& doc) {
  Hyperparameters hp;
  if (doc.is_null()) return hp;
  if (!doc.is_object()) throw Error(ErrorCode::InvalidHyperparameters, "hyperparameters must be an object");
  try {
    hp.n_trees = doc.value("n_trees", hp.n_trees);
    hp.max_depth = doc.value("max_depth", hp.max_depth);
    hp.min_leaf = doc.value("min_leaf", hp.min_leaf);
    hp.feature_subsample = doc.value("feature_subsample", hp.feature_subsample);
    hp.seed = doc.value("seed", hp.seed);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidHyperparameters, std::string("malformed hyperparameters: ") + e.what());
  }
  hp.validate();
  return hp;
}

ClassProbabilities ModelArtifact::proba(const double* x) const noexcept {
  double p0 = 0.0, p1 = 0.0;
  for (const auto& tree : trees) {
    const auto& p = tree.predict(x);
    p0 += p[0];
    p1 += p[1];
  }
  const double n = static_cast<double>(trees.size());
  return {p0 / n, p1 / n};
}

void ModelArtifact::validate() const {
  if (trees.empty()) throw Error(ErrorCode::InvalidArtifact, "model has no trees");
  for (const auto& tree : trees) tree.validate(feature_names.size());
}

json ModelArtifact::to_json() const {
  json forest = json::array();
  for (const auto& tree : trees) forest.push_back(tree.to_json());
  return {{"v", kFormatVersion},
          {"feature_names", feature_names},
          {"hyperparameters", hyperparameters.to_json()},
          {"train_snapshot_id", train_snapshot_id},
          {"train_size", train_size},
          {"trees", std::move(forest)}};
}

ModelArtifact ModelArtifact::from_json(const json& doc) {
  ModelArtifact m;
  try {
    if (doc.at("v").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::InvalidArtifact, "unsupported model format version");
    }
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    m.hyperparameters = Hyperparameters::from_json(doc.at("hyperparameters"));
    m.train_snapshot_id = doc.at("train_snapshot_id").get<std::string>();
    m.train_size = doc.at("train_size").get<std::size_t>();
    for (const auto& t : doc.at("trees")) m.trees.push_back(DecisionTree::from_json(t));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArtifact, std::string("malformed model artifact: ") + e.what());
  }
  m.validate();
  return m;
}

std::string ModelArtifact::canonical_bytes() const { return canonical_dump(to_json()); }

json ModelMetrics::to_json() const {
  return {{"holdout_accuracy", holdout_accuracy},
          {"train_size", train_size},
          {"holdout_size", holdout_size},
          {"n_features", n_features},
          {"confusion", {{"tn", confusion.tn}, {"fp", confusion.fp}, {"fn", confusion.fn}, {"tp", confusion.tp}}},
          {"positive_rate", positive_rate}};
}

ModelMetrics ModelMetrics::from_json(const json& doc) {
  ModelMetrics m;
  m.holdout_accuracy = doc.at("holdout_accuracy").get<double>();
  m.train_size = doc.at("train_size").get<std::size_t>();
  m.holdout_size = doc.at("holdout_size").get<std::size_t>();
  m.n_features = doc.at("n_features").get<std::size_t>();
  const auto& c = doc.at("confusion");
  m.confusion = {c.at("tn").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                 c.at("fn").get<std::size_t>(), c.at("tp").get<std::size_t>()};
  m.positive_rate = doc.at("positive_rate").get<double>();
  return m;
}

HoldoutSplit stratified_split(const Dataset& ds, std::uint64_t seed) {
  auto rng = SplitMix64::derive(seed, Stream::HoldoutSplit);
  HoldoutSplit split;
  for (int label = 0; label < 2; ++label) {
    std::vector<std::size_t> members;
    for (std::size_t r = 0; r < ds.size(); ++r) {
      if (ds.rows()[r].label == label) members.push_back(r);
    }
    if (members.empty()) continue;
    shuffle(std::span<std::size_t>(members), rng);
    auto n_holdout = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(members.size())));
    n_holdout = std::min(n_holdout, members.size() - 1);
    split.holdout.insert(split.holdout.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_holdout));
    split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_holdout), members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.holdout.begin(), split.holdout.end());
  return split;
}

TrainResult train(const Dataset& ds, const Hyperparameters& hp) {
  hp.validate();
  if (ds.size() < 20) {
    throw Error(ErrorCode::TooFewRows, "training needs at least 20 rows", {{"rows", ds.size()}});
  }
  const auto counts = ds.class_counts();
  if (counts[0] == 0 || counts[1] == 0) {
    throw Error(ErrorCode::SingleClassData, "training data must contain both classes");
  }

  const HoldoutSplit split = stratified_split(ds, hp.seed);
  const Dataset train_part = select_rows(ds, split.train);
  const Dataset holdout_part = select_rows(ds, split.holdout);

  const FeatureMatrix x(train_part);
  std::vector<int> labels;
  labels.reserve(train_part.size());
  for (const auto& row : train_part.rows()) labels.push_back(row.label);

  GrowOptions options;
  options.max_depth = hp.max_depth;
  options.min_leaf = hp.min_leaf;
  const auto n_features = static_cast<double>(ds.n_features());
  options.features_per_split = static_cast<std::size_t>(
      std::clamp<long long>(std::llround(hp.feature_subsample * n_features), 1,
                            static_cast<long long>(ds.n_features())));

  ModelArtifact model;
  model.feature_names = ds.feature_names();
  model.hyperparameters = hp;
  model.train_snapshot_id = ds.snapshot_id();
  model.train_size = train_part.size();
  model.trees.reserve(static_cast<std::size_t>(hp.n_trees));

  const auto n_train = static_cast<std::uint64_t>(train_part.size());
  for (int t = 0; t < hp.n_trees; ++t) {
    auto rng = SplitMix64::derive(hp.seed, Stream::TreeBootstrap, static_cast<std::uint64_t>(t));
    std::vector<std::uint32_t> bootstrap(train_part.size());
    for (auto& r : bootstrap) r = static_cast<std::uint32_t>(rng.uniform_index(n_train));
    model.trees.push_back(grow_tree(x, labels, std::move(bootstrap), options, &rng));
  }

  ModelMetrics metrics = evaluate(model, holdout_part);
  return {std::move(model), metrics};
}

ClassProbabilities predict_proba(const ModelArtifact& model, std::span<const Cell> x) {
  if (x.size() != model.feature_names.size()) {
    throw Error(ErrorCode::DimensionMismatch, "instance length differs from model features",
                {{"expected", model.feature_names.size()}, {"got", x.size()}});
  }
  const auto dense = to_dense(x);
  return model.proba(dense.data());
}

ModelMetrics evaluate(const ModelArtifact& model, const Dataset& ds) {
  if (ds.feature_names() != model.feature_names) {
    throw Error(ErrorCode::SchemaMismatch, "dataset features differ from model features");
  }
  ModelMetrics m;
  m.train_size = model.train_size;
  m.holdout_size = ds.size();
  m.n_features = model.feature_names.size();
  std::size_t predicted_positive = 0;
  for (const auto& row : ds.rows()) {
    const int predicted = argmax(predict_proba(model, row.values));
    predicted_positive += static_cast<std::size_t>(predicted);
    if (row.label == 0) {
      ++(predicted == 0 ? m.confusion.tn : m.confusion.fp);
    } else {
      ++(predicted == 0 ? m.confusion.fn : m.confusion.tp);
    }
  }
  const auto total = static_cast<double>(m.confusion.total());
  m.holdout_accuracy = total > 0 ? static_cast<double>(m.confusion.tp + m.confusion.tn) / total : 0.0;
  m.positive_rate = total > 0 ? static_cast<double>(predicted_positive) / total : 0.0;
  return m;
}

}  // namespace steer
