#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "steer/dataset.hpp"
#include "steer/error.hpp"

using namespace steer;
using steer::test::numeric_dataset;

namespace {

SchemaDocument two_feature_schema() {
  return SchemaDocument::from_json(nlohmann::json::parse(R"({
    "features": [{"name": "a"}, {"name": "b", "zero_is_missing": true}],
    "target": {"name": "y", "labels": ["no", "yes"]}})"));
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::Internal;
}

}  // namespace

TEST(PimaIngest, MatchesIndependentLineScan) {
  const auto scan = steer::test::scan_csv_lines(steer::test::pima_csv());
  const Dataset& ds = steer::test::pima_dataset();
  ASSERT_EQ(ds.size(), scan.data_rows);
  ASSERT_EQ(ds.n_features(), 8u);
  EXPECT_EQ(ds.size(), 768u);

  std::size_t positives_scan = 0;
  for (const auto& [text, count] : scan.last_column_counts) {
    if (text == "1") positives_scan = count;
  }
  EXPECT_EQ(ds.class_counts()[1], positives_scan);
  EXPECT_EQ(ds.class_counts()[1], 268u);

  for (std::size_t j = 0; j < ds.n_features(); ++j) {
    const auto& spec = ds.schema()[j];
    std::size_t column = 0;
    while (scan.header[column] != spec.name) ++column;
    std::size_t missing = 0;
    for (const auto& row : ds.rows()) missing += row.values[j] ? 0 : 1;
    const std::size_t expected = scan.empty_cells[column] + (spec.zero_is_missing ? scan.zero_cells[column] : 0);
    EXPECT_EQ(missing, expected) << spec.name;
  }
}

TEST(PimaIngest, SnapshotIdIsContentDigest) {
  const Dataset& ds = steer::test::pima_dataset();
  const Dataset again = ingest_csv(steer::test::pima_csv(), SchemaDocument::from_json(steer::test::pima_schema_json()));
  EXPECT_EQ(ds.snapshot_id(), again.snapshot_id());
  EXPECT_EQ(ds.snapshot_id().size(), 64u);
}

TEST(Ingest, LocatesColumnsByNameAndIgnoresExtras) {
  const auto ds = ingest_csv("extra,b,y,a\nq,3,yes,1\nr,0,no,2\ns,,no,\n", two_feature_schema());
  ASSERT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.rows()[0].values, (std::vector<Cell>{1.0, 3.0}));
  EXPECT_EQ(ds.rows()[0].label, 1);
  EXPECT_EQ(ds.rows()[1].values, (std::vector<Cell>{2.0, std::nullopt}));
  EXPECT_EQ(ds.rows()[2].values, (std::vector<Cell>{std::nullopt, std::nullopt}));
}

TEST(Ingest, ZeroIsOnlyMissingWhereDeclared) {
  const auto ds = ingest_csv("a,b,y\n0,0,no\n", two_feature_schema());
  EXPECT_EQ(ds.rows()[0].values, (std::vector<Cell>{0.0, std::nullopt}));
}

TEST(Ingest, ErrorCodes) {
  const auto schema = two_feature_schema();
  EXPECT_EQ(code_of([&] { ingest_csv("", schema); }), ErrorCode::EmptyFile);
  EXPECT_EQ(code_of([&] { ingest_csv("a,b,y\n", schema); }), ErrorCode::EmptyFile);
  EXPECT_EQ(code_of([&] { ingest_csv("a,y\n1,no\n", schema); }), ErrorCode::MissingColumn);
  EXPECT_EQ(code_of([&] { ingest_csv("a,b,y\n1,x2,no\n", schema); }), ErrorCode::UnparseableCell);
  EXPECT_EQ(code_of([&] { ingest_csv("a,b,y\n1,inf,no\n", schema); }), ErrorCode::UnparseableCell);
  EXPECT_EQ(code_of([&] { ingest_csv("a,b,y\n1,2,maybe\n", schema); }), ErrorCode::UnknownLabel);
}

TEST(Ingest, ErrorDetailsNameTheCell) {
  try {
    ingest_csv("a,b,y\n1,2,no\n3,oops,yes\n", two_feature_schema());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.details().at("row"), 2);
    EXPECT_EQ(e.details().at("column"), "b");
  }
}

TEST(SchemaDocument, RejectsMalformed) {
  using nlohmann::json;
  auto bad = [](const char* text) { return code_of([&] { SchemaDocument::from_json(json::parse(text)); }); };
  EXPECT_EQ(bad(R"({"features": [], "target": {"name": "y", "labels": ["0","1"]}})"), ErrorCode::InvalidSchema);
  EXPECT_EQ(bad(R"({"features": [{"name":"a"},{"name":"a"}], "target": {"name": "y", "labels": ["0","1"]}})"),
            ErrorCode::InvalidSchema);
  EXPECT_EQ(bad(R"({"features": [{"name":"a"}], "target": {"name": "a", "labels": ["0","1"]}})"),
            ErrorCode::InvalidSchema);
  EXPECT_EQ(bad(R"({"features": [{"name":"a"}], "target": {"name": "y", "labels": ["0"]}})"), ErrorCode::InvalidSchema);
  EXPECT_EQ(bad(R"({"features": [{"name":"a","kind":"text"}], "target": {"name": "y", "labels": ["0","1"]}})"),
            ErrorCode::InvalidSchema);
  EXPECT_EQ(bad(R"({"features": [{"name":"a","plausible_min":5,"plausible_max":1}],
                    "target": {"name": "y", "labels": ["0","1"]}})"),
            ErrorCode::InvalidSchema);
  EXPECT_EQ(bad(R"({"target": {"name": "y", "labels": ["0","1"]}})"), ErrorCode::InvalidSchema);
}

TEST(SchemaDocument, RoundTripsAndDefaultsDisplayLabel) {
  const auto doc = two_feature_schema();
  EXPECT_EQ(doc.features[0].display_label, "a");
  EXPECT_EQ(SchemaDocument::from_json(doc.to_json()), doc);
  const auto pima = SchemaDocument::from_json(steer::test::pima_schema_json());
  EXPECT_EQ(SchemaDocument::from_json(pima.to_json()), pima);
}

TEST(Dataset, JsonRoundTripPreservesMissingAndId) {
  const Dataset& ds = steer::test::pima_dataset();
  const Dataset back = Dataset::from_json(nlohmann::json::parse(ds.canonical_bytes()));
  EXPECT_EQ(back.snapshot_id(), ds.snapshot_id());
  EXPECT_EQ(back.rows(), ds.rows());
  EXPECT_EQ(back.schema(), ds.schema());
}

TEST(Dataset, IdentityOperationsKeepTheId) {
  const Dataset& ds = steer::test::pima_dataset();
  std::set<std::string> all;
  for (const auto& n : ds.feature_names()) all.insert(n);
  EXPECT_EQ(project_features(ds, all).snapshot_id(), ds.snapshot_id());
  EXPECT_EQ(filter_rows(ds, {}).dataset.snapshot_id(), ds.snapshot_id());
  EXPECT_NE(ds.with_rows({ds.rows().begin(), ds.rows().end() - 1}).snapshot_id(), ds.snapshot_id());
}

TEST(Dataset, RejectsWrongArityAndLabels) {
  EXPECT_EQ(code_of([] { numeric_dataset({{1.0, 2.0}, {1.0}}, {0, 1}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { numeric_dataset({{1.0}}, {2}); }), ErrorCode::UnknownLabel);
}

TEST(FilterRows, KeepsMissingAndClosedBounds) {
  const auto ds = numeric_dataset({{1.0}, {2.0}, {std::nullopt}, {3.0}, {2.5}}, {0, 1, 0, 1, 0});
  const auto r = filter_rows(ds, {{"f0", {2.0, 2.5}}});
  EXPECT_EQ(r.removed_count, 2u);
  ASSERT_EQ(r.dataset.size(), 3u);
  EXPECT_EQ(r.dataset.rows()[0].values[0], 2.0);
  EXPECT_FALSE(r.dataset.rows()[1].values[0].has_value());
  EXPECT_EQ(r.dataset.rows()[2].values[0], 2.5);
}

TEST(FilterRows, Errors) {
  const auto ds = numeric_dataset({{1.0}}, {0});
  EXPECT_EQ(code_of([&] { filter_rows(ds, {{"nope", {0, 1}}}); }), ErrorCode::UnknownFeature);
  EXPECT_EQ(code_of([&] { filter_rows(ds, {{"f0", {2, 1}}}); }), ErrorCode::InvertedRange);
}

TEST(ProjectFeatures, KeepsSchemaOrder) {
  const auto ds = numeric_dataset({{1.0, 2.0, 3.0}}, {1});
  const auto p = project_features(ds, {"f2", "f0"});
  EXPECT_EQ(p.feature_names(), (std::vector<std::string>{"f0", "f2"}));
  EXPECT_EQ(p.rows()[0].values, (std::vector<Cell>{1.0, 3.0}));
  EXPECT_EQ(code_of([&] { project_features(ds, {}); }), ErrorCode::EmptySelection);
  EXPECT_EQ(code_of([&] { project_features(ds, {"zz"}); }), ErrorCode::UnknownFeature);
}

TEST(ToCsv, ReingestsToSameSnapshot) {
  const Dataset& ds = steer::test::pima_dataset();
  SchemaDocument schema{ds.schema(), ds.target()};
  for (auto& f : schema.features) f.zero_is_missing = false;
  const Dataset back = ingest_csv(to_csv(ds), schema);
  EXPECT_EQ(back.rows(), ds.rows());
}

TEST(SelectRows, ReordersAndRepeats) {
  const auto ds = numeric_dataset({{1.0}, {2.0}, {3.0}}, {0, 1, 0});
  const std::vector<std::size_t> pos = {2, 0, 2};
  const auto s = select_rows(ds, pos);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.rows()[0].values[0], 3.0);
  EXPECT_EQ(s.rows()[1].values[0], 1.0);
}
