#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "steer/bundle.hpp"
#include "steer/canonical_json.hpp"
#include "steer/json_schema.hpp"

using namespace steer;
using nlohmann::json;

namespace {

const ExplanationBundle& pima_bundle() {
  static const ExplanationBundle b = [] {
    const auto& t = test::pima_trained();
    return build_bundle(t.model, t.metrics, test::pima_dataset(), std::nullopt);
  }();
  return b;
}

}  // namespace

TEST(Bundle, DeterministicBytes) {
  const auto& t = test::pima_trained();
  const auto again = build_bundle(t.model, t.metrics, test::pima_dataset(), std::nullopt);
  EXPECT_EQ(again.canonical_bytes(), pima_bundle().canonical_bytes());
  EXPECT_EQ(canonical_dump(json::parse(again.canonical_bytes())), again.canonical_bytes());
}

TEST(Bundle, InitialHasNoDelta) {
  const auto& b = pima_bundle();
  EXPECT_FALSE(b.accuracy_delta);
  EXPECT_FALSE(b.to_json().contains("accuracy_delta"));
  const auto& t = test::pima_trained();
  const auto later = build_bundle(t.model, t.metrics, test::pima_dataset(), 0.7);
  ASSERT_TRUE(later.accuracy_delta);
  EXPECT_EQ(*later.accuracy_delta, t.metrics.holdout_accuracy - 0.7);
}

TEST(Bundle, ContentsAndSchema) {
  const auto& b = pima_bundle();
  EXPECT_EQ(b.snapshot_id, test::pima_dataset().snapshot_id());
  EXPECT_EQ(b.dataset_rows, 768u);
  EXPECT_EQ(b.features.size(), 8u);
  EXPECT_EQ(b.metrics, test::pima_trained().metrics);
  EXPECT_LE(b.top_rules.size(), 5u);
  EXPECT_GE(b.total_rules, b.top_rules.size());
  EXPECT_GE(b.surrogate_fidelity, 0.0);
  EXPECT_LE(b.surrogate_fidelity, 1.0);
  EXPECT_EQ(b.distributions.size(), 8u);
  const auto violation = validate_against("bundle", b.to_json());
  EXPECT_FALSE(violation) << violation->instance_path << " " << violation->keyword;
  const auto j = b.to_json();
  EXPECT_EQ(j.at("v"), ExplanationBundle::kFormatVersion);
  EXPECT_EQ(j.at("dataset").at("snapshot_id"), b.snapshot_id);
  for (const char* key : {"dataset", "metrics", "global_importance", "top_rules", "total_rules", "surrogate_fidelity", "insights",
                          "distributions", "quality"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}
