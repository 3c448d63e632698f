#include <algorithm>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "steer/error.hpp"
#include "steer/session.hpp"

using namespace steer;
namespace fs = std::filesystem;

namespace {

SteeringOptions test_options() {
  SteeringOptions o;
  o.clock = fixed_clock("2026-01-01T00:00:00Z");
  return o;
}

struct Project {
  test::TempDir dir;
  Store store{dir.path()};
  SteeringSession session;
  ProjectStore project{"", ""};

  Project() {
    session = initialize_project(store, test::pima_csv(), test::pima_schema_json(), Hyperparameters{},
                                 test_options());
    project = store.open_project(session.project_id);
  }
};

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

TEST(Session, InitialVersion) {
  Project p;
  ASSERT_EQ(p.session.versions.size(), 1u);
  const auto& v = p.session.active();
  EXPECT_EQ(v.version_id, 1u);
  EXPECT_FALSE(v.parent);
  EXPECT_EQ(v.cause, VersionCause::Initial);
  EXPECT_FALSE(v.accuracy_delta);
  EXPECT_EQ(v.dataset_rows, 768u);
  EXPECT_EQ(v.metrics.holdout_accuracy, test::pima_trained().metrics.holdout_accuracy);
  EXPECT_EQ(v.dataset_snapshot_id, test::pima_dataset().snapshot_id());
  EXPECT_EQ(v.created_at, "2026-01-01T00:00:00Z");
  EXPECT_EQ(v.summary, "Initial model on 768 rows and 8 features; hold-out accuracy 0.7468.");
  EXPECT_EQ(p.project.source_csv(), test::pima_csv());
}

TEST(Session, InitializeIsAtomic) {
  test::TempDir dir;
  Store store(dir.path());
  auto bad_schema = test::pima_schema_json();
  bad_schema["features"][0]["name"] = "NoSuchColumn";
  EXPECT_EQ(code_of([&] { initialize_project(store, test::pima_csv(), bad_schema, Hyperparameters{}); }),
            ErrorCode::MissingColumn);
  Hyperparameters hp;
  hp.n_trees = 0;
  EXPECT_EQ(code_of([&] { initialize_project(store, test::pima_csv(), test::pima_schema_json(), hp); }),
            ErrorCode::InvalidHyperparameters);
  EXPECT_TRUE(store.list_projects().empty());
  if (fs::exists(dir.path() / "projects")) {
    EXPECT_TRUE(fs::is_empty(dir.path() / "projects"));
  }
}

TEST(Session, IdentityManualHasZeroDelta) {
  Project p;
  const auto cfg = ManualConfiguration::identity(test::pima_dataset(), 1);
  const auto result = steer_manual(p.project, p.session, cfg, test_options());
  EXPECT_EQ(result.verdict.kind, VerdictKind::Ok);
  ASSERT_TRUE(result.version.accuracy_delta);
  EXPECT_EQ(*result.version.accuracy_delta, 0.0);
  EXPECT_EQ(result.version.dataset_snapshot_id, p.session.versions[0].dataset_snapshot_id);
  EXPECT_EQ(result.version.model_id, p.session.versions[0].model_id);
  EXPECT_EQ(p.session.active_version, 2u);
  EXPECT_EQ(p.project.load_session().versions.size(), 2u);
}

TEST(Session, ManualDropComputesDeltaAgainstBase) {
  Project p;
  ManualConfiguration cfg;
  cfg.base_version = 1;
  for (const auto& f : test::pima_dataset().feature_names()) {
    if (f != "SkinThickness") cfg.included_features.insert(f);
  }
  cfg.ranges["BMI"] = {15, 60};
  const auto result = steer_manual(p.project, p.session, cfg, test_options());
  const auto& v = result.version;
  EXPECT_EQ(v.metrics.n_features, 7u);
  EXPECT_LT(v.dataset_rows, 768u);
  ASSERT_TRUE(v.accuracy_delta);
  EXPECT_EQ(*v.accuracy_delta, v.metrics.holdout_accuracy - p.session.versions[0].metrics.holdout_accuracy);
  EXPECT_EQ(v.config_payload, cfg.to_json());
}

TEST(Session, RejectedManualChangesNothing) {
  Project p;
  const auto before = p.project.journal_bytes();
  ManualConfiguration cfg;
  cfg.base_version = 1;
  cfg.included_features = {"Glucose"};
  EXPECT_EQ(code_of([&] { steer_manual(p.project, p.session, cfg, test_options()); }),
            ErrorCode::GuardrailMinFeatures);
  EXPECT_EQ(p.project.journal_bytes(), before);
  EXPECT_EQ(p.session.versions.size(), 1u);
}

TEST(Session, StaleBaseIsRejected) {
  Project p;
  steer_manual(p.project, p.session, ManualConfiguration::identity(test::pima_dataset(), 1), test_options());
  const auto before = p.project.journal_bytes();
  try {
    steer_manual(p.project, p.session, ManualConfiguration::identity(test::pima_dataset(), 1), test_options());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StaleBaseVersion);
    EXPECT_EQ(e.details().at("base_version"), 1);
    EXPECT_EQ(e.details().at("active_version"), 2);
  }
  CorrectionPlan plan;
  plan.selected_kinds = {IssueKind::DisguisedMissing};
  plan.base_version = 1;
  plan.seed = 42;
  EXPECT_EQ(code_of([&] { steer_automated(p.project, p.session, plan, test_options()); }),
            ErrorCode::StaleBaseVersion);
  EXPECT_EQ(code_of([&] { rollback(p.project, p.session, 1, 1, test_options()); }), ErrorCode::StaleBaseVersion);
  EXPECT_EQ(p.project.journal_bytes(), before);
}

TEST(Session, AutomatedDeltaMatchesSandboxImpact) {
  Project p;
  const auto issues = detect_issues(test::pima_dataset(), Hyperparameters{});
  const auto it = std::find_if(issues.begin(), issues.end(),
                               [](const DataIssue& i) { return i.kind == IssueKind::DisguisedMissing; });
  ASSERT_NE(it, issues.end());
  CorrectionPlan plan;
  plan.selected_kinds = {IssueKind::DisguisedMissing};
  plan.base_version = 1;
  plan.seed = Hyperparameters{}.seed;
  const auto v = steer_automated(p.project, p.session, plan, test_options());
  EXPECT_EQ(v.cause, VersionCause::Automated);
  ASSERT_TRUE(v.accuracy_delta);
  EXPECT_EQ(*v.accuracy_delta, it->estimated_accuracy_impact);
  EXPECT_EQ(v.metrics.holdout_accuracy, it->corrected_accuracy);
  ASSERT_EQ(v.corrections.size(), 1u);
  EXPECT_EQ(v.corrections[0].at("kind"), "disguised_missing");
  EXPECT_EQ(v.summary, "Automated corrections: disguised_missing.");
}

TEST(Session, AutomatedStaleIssue) {
  Project p;
  CorrectionPlan plan;
  plan.selected_kinds = {IssueKind::Duplicates};
  plan.base_version = 1;
  plan.seed = 42;
  EXPECT_EQ(code_of([&] { steer_automated(p.project, p.session, plan, test_options()); }),
            ErrorCode::StaleIssue);
  EXPECT_EQ(p.project.load_session().versions.size(), 1u);
}

TEST(Session, RollbackReusesTargetArtifacts) {
  Project p;
  ManualConfiguration cfg;
  cfg.base_version = 1;
  cfg.included_features = {"Glucose", "BMI", "Age"};
  steer_manual(p.project, p.session, cfg, test_options());
  const auto v2 = p.session.active();
  const auto v3 = rollback(p.project, p.session, 1, std::nullopt, test_options());
  const auto& v1 = p.session.versions[0];
  EXPECT_EQ(v3.version_id, 3u);
  EXPECT_EQ(v3.parent, 2u);
  EXPECT_EQ(v3.cause, VersionCause::Rollback);
  EXPECT_EQ(v3.dataset_snapshot_id, v1.dataset_snapshot_id);
  EXPECT_EQ(v3.model_id, v1.model_id);
  EXPECT_EQ(v3.bundle_id, v1.bundle_id);
  EXPECT_EQ(v3.metrics, v1.metrics);
  ASSERT_TRUE(v3.accuracy_delta);
  EXPECT_EQ(*v3.accuracy_delta, v1.metrics.holdout_accuracy - v2.metrics.holdout_accuracy);
  EXPECT_EQ(v3.config_payload, (nlohmann::json{{"version_id", 1}, {"base_version", 2}}));
  EXPECT_EQ(v3.summary, "Rollback to version 1.");

  EXPECT_EQ(code_of([&] { rollback(p.project, p.session, 9, std::nullopt, test_options()); }),
            ErrorCode::UnknownVersion);
}

TEST(Session, HistoryAndVerify) {
  Project p;
  steer_manual(p.project, p.session, ManualConfiguration::identity(test::pima_dataset(), 1), test_options());
  CorrectionPlan plan;
  plan.selected_kinds = {IssueKind::DisguisedMissing, IssueKind::Outliers};
  plan.base_version = 2;
  plan.seed = 42;
  steer_automated(p.project, p.session, plan, test_options());
  rollback(p.project, p.session, 2, 3, test_options());

  const auto h = history(p.session);
  ASSERT_EQ(h.size(), 4u);
  EXPECT_EQ(h[0].cause, VersionCause::Initial);
  EXPECT_FALSE(h[0].delta);
  EXPECT_EQ(h[3].cause, VersionCause::Rollback);
  EXPECT_EQ(h[3].parent, 3u);
  const auto j = h[1].to_json();
  for (const char* key : {"version_id", "parent", "cause", "accuracy", "delta", "summary", "created_at"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }

  const auto report = verify_project(p.project, test_options());
  EXPECT_EQ(report.versions.size(), 4u);
  for (const auto& v : report.versions) {
    EXPECT_TRUE(v.mismatches.empty()) << v.version_id << ": " << (v.mismatches.empty() ? "" : v.mismatches[0]);
  }
  EXPECT_TRUE(report.ok());
}

TEST(Session, VerifyDetectsTamperedBundle) {
  Project p;
  const auto& v1 = p.session.active();
  ExplanationBundle other;
  other.snapshot_id = "tampered";
  const auto path = p.project.dir() / "bundles" / (v1.bundle_id + ".json");
  fs::permissions(path, fs::perms::owner_write, fs::perm_options::add);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << other.canonical_bytes();
  }
  const auto report = verify_project(p.project, test_options());
  EXPECT_FALSE(report.ok());
  EXPECT_GE(report.mismatch_count(), 1u);
}
