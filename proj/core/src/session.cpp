#include "steer/session.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <map>
#include <utility>

#include "steer/canonical_json.hpp"
#include "steer/error.hpp"

namespace steer {

using nlohmann::json;

std::string utc_now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Clock fixed_clock(std::string stamp) {
  return [stamp = std::move(stamp)] { return stamp; };
}

namespace {

std::string now(const SteeringOptions& options) {
  return options.clock ? options.clock() : utc_now_iso8601();
}

std::string fmt_accuracy(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string initial_summary(const Dataset& ds, const ModelMetrics& m) {
  return "Initial model on " + std::to_string(ds.size()) + " rows and " + std::to_string(ds.n_features()) +
         " features; hold-out accuracy " + fmt_accuracy(m.holdout_accuracy) + ".";
}

std::string manual_summary(const Dataset& before, const Dataset& after) {
  std::string s = "Manual configuration: " + std::to_string(after.n_features()) + " of " +
                  std::to_string(before.n_features()) + " features kept";
  const std::size_t dropped = before.size() - after.size();
  s += ", " + std::to_string(dropped) + (dropped == 1 ? " row" : " rows") + " filtered out.";
  return s;
}

std::string automated_summary(const std::vector<CorrectionRecord>& applied) {
  std::string s = "Automated corrections:";
  for (std::size_t i = 0; i < applied.size(); ++i) {
    s += (i == 0 ? " " : ", ");
    s += issue_name(applied[i].kind);
  }
  return s + ".";
}

std::string rollback_summary(std::uint64_t target) {
  return "Rollback to version " + std::to_string(target) + ".";
}

void check_base(const SteeringSession& committed, std::uint64_t base_version) {
  if (base_version != committed.active_version) {
    throw Error(ErrorCode::StaleBaseVersion,
                "base_version " + std::to_string(base_version) + " is not the active version " +
                    std::to_string(committed.active_version),
                {{"base_version", base_version}, {"active_version", committed.active_version}});
  }
}

struct Built {
  TrainResult trained;
  ExplanationBundle bundle;
};

Built train_and_explain(const Dataset& ds, const Hyperparameters& hp, std::optional<double> previous,
                        const BundleOptions& options) {
  Built b{train(ds, hp), {}};
  b.bundle = build_bundle(b.trained.model, b.trained.metrics, ds, previous, options);
  return b;
}

SessionVersion commit(const ProjectStore& project, SteeringSession& session, SteeringSession committed,
                      SessionVersion version) {
  project.append_version(version);
  committed.versions.push_back(version);
  committed.active_version = version.version_id;
  session = std::move(committed);
  return version;
}

SessionVersion successor(const SteeringSession& committed, VersionCause cause, const SteeringOptions& options) {
  SessionVersion v;
  v.version_id = committed.versions.back().version_id + 1;
  v.parent = committed.active_version;
  v.cause = cause;
  v.created_at = now(options);
  return v;
}

void fill_from_build(SessionVersion& v, const ProjectStore& project, const Dataset& ds, const Built& b,
                     double parent_accuracy) {
  v.dataset_snapshot_id = project.put_snapshot(ds);
  v.dataset_rows = ds.size();
  v.model_id = project.put_model(b.trained.model);
  v.bundle_id = project.put_bundle(b.bundle);
  v.metrics = b.trained.metrics;
  v.accuracy_delta = b.trained.metrics.holdout_accuracy - parent_accuracy;
}

}  // namespace

SteeringSession initialize_project(const Store& store, std::string_view csv_text, const json& schema_doc,
                                   const Hyperparameters& hp, const SteeringOptions& options) {
  hp.validate();
  const SchemaDocument schema = SchemaDocument::from_json(schema_doc);
  const Dataset ds = ingest_csv(csv_text, schema);
  const Built b = train_and_explain(ds, hp, std::nullopt, options.bundle);

  SessionVersion v;
  v.version_id = 1;
  v.cause = VersionCause::Initial;
  v.config_payload = json::object();
  v.dataset_rows = ds.size();
  v.metrics = b.trained.metrics;
  v.summary = initial_summary(ds, b.trained.metrics);
  v.created_at = now(options);

  const ProjectStore staged = store.stage_project();
  std::string project_id;
  try {
    staged.write_metadata(hp, schema, csv_text);
    v.dataset_snapshot_id = staged.put_snapshot(ds);
    v.model_id = staged.put_model(b.trained.model);
    v.bundle_id = staged.put_bundle(b.bundle);
    staged.append_version(v);
    project_id = store.publish(staged);
  } catch (...) {
    store.discard(staged);
    throw;
  }
  return store.open_project(project_id).load_session();
}

ManualSteerResult steer_manual(const ProjectStore& project, SteeringSession& session,
                               const ManualConfiguration& cfg, const SteeringOptions& options) {
  const ProjectLock guard = project.lock();
  SteeringSession committed = project.load_session();
  check_base(committed, cfg.base_version);

  const SessionVersion& base = committed.active();
  const Dataset before = project.get_snapshot(base.dataset_snapshot_id);
  ManualVerdict verdict = validate_manual(cfg, before, options.policy);
  const Dataset after = apply_manual(cfg, before, options.policy);
  const Built b = train_and_explain(after, committed.hyperparameters, base.metrics.holdout_accuracy, options.bundle);

  SessionVersion v = successor(committed, VersionCause::Manual, options);
  v.config_payload = cfg.to_json();
  v.summary = manual_summary(before, after);
  fill_from_build(v, project, after, b, base.metrics.holdout_accuracy);
  return {commit(project, session, std::move(committed), std::move(v)), std::move(verdict)};
}

SessionVersion steer_automated(const ProjectStore& project, SteeringSession& session, const CorrectionPlan& plan,
                               const SteeringOptions& options) {
  plan.validate();
  const ProjectLock guard = project.lock();
  SteeringSession committed = project.load_session();
  check_base(committed, plan.base_version);

  const SessionVersion& base = committed.active();
  const Dataset before = project.get_snapshot(base.dataset_snapshot_id);
  const CorrectionResult corrected = apply_corrections(plan, before);
  const Built b =
      train_and_explain(corrected.dataset, committed.hyperparameters, base.metrics.holdout_accuracy, options.bundle);

  SessionVersion v = successor(committed, VersionCause::Automated, options);
  v.config_payload = plan.to_json();
  v.summary = automated_summary(corrected.applied);
  v.corrections = json::array();
  for (const auto& record : corrected.applied) v.corrections.push_back(record.to_json());
  fill_from_build(v, project, corrected.dataset, b, base.metrics.holdout_accuracy);
  return commit(project, session, std::move(committed), std::move(v));
}

SessionVersion rollback(const ProjectStore& project, SteeringSession& session, std::uint64_t target_version,
                        std::optional<std::uint64_t> base_version, const SteeringOptions& options) {
  const ProjectLock guard = project.lock();
  SteeringSession committed = project.load_session();
  if (base_version) check_base(committed, *base_version);
  const SessionVersion* target = committed.find(target_version);
  if (target == nullptr) {
    throw Error(ErrorCode::UnknownVersion, "no version " + std::to_string(target_version),
                {{"version_id", target_version}});
  }
  const SessionVersion& base = committed.active();

  SessionVersion v = successor(committed, VersionCause::Rollback, options);
  v.config_payload = {{"version_id", target_version}, {"base_version", committed.active_version}};
  v.dataset_snapshot_id = target->dataset_snapshot_id;
  v.dataset_rows = target->dataset_rows;
  v.model_id = target->model_id;
  v.bundle_id = target->bundle_id;
  v.metrics = target->metrics;
  v.accuracy_delta = target->metrics.holdout_accuracy - base.metrics.holdout_accuracy;
  v.summary = rollback_summary(target_version);
  return commit(project, session, std::move(committed), std::move(v));
}

json HistoryEntry::to_json() const {
  return {{"version_id", version_id},
          {"parent", parent ? json(*parent) : json(nullptr)},
          {"cause", cause_name(cause)},
          {"accuracy", accuracy},
          {"delta", delta ? json(*delta) : json(nullptr)},
          {"summary", summary},
          {"created_at", created_at}};
}

std::vector<HistoryEntry> history(const SteeringSession& session) {
  std::vector<HistoryEntry> out;
  out.reserve(session.versions.size());
  for (const auto& v : session.versions) {
    out.push_back({v.version_id, v.parent, v.cause, v.metrics.holdout_accuracy, v.accuracy_delta, v.summary,
                   v.created_at});
  }
  return out;
}

std::size_t VerifyReport::mismatch_count() const noexcept {
  std::size_t n = 0;
  for (const auto& v : versions) n += v.mismatches.size();
  return n;
}

VerifyReport verify_project(const ProjectStore& project, const SteeringOptions& options) {
  const SteeringSession session = project.load_session();
  const Hyperparameters& hp = session.hyperparameters;
  const SchemaDocument schema = project.schema();

  struct Replayed {
    std::optional<Dataset> ds;
    double accuracy = 0.0;
  };
  std::map<std::uint64_t, Replayed> replayed;
  VerifyReport report;

  for (const auto& v : session.versions) {
    VersionCheck check{v.version_id, {}};
    auto mismatch = [&](std::string what) { check.mismatches.push_back(std::move(what)); };
    std::optional<Dataset> ds;
    std::optional<Built> built;
    const Replayed* parent = v.parent ? &replayed.at(*v.parent) : nullptr;

    try {
      switch (v.cause) {
        case VersionCause::Initial:
          ds = ingest_csv(project.source_csv(), schema);
          break;
        case VersionCause::Manual:
          if (parent && parent->ds) {
            const auto cfg = ManualConfiguration::from_json(v.config_payload);
            ds = filter_rows(project_features(*parent->ds, cfg.included_features), cfg.ranges).dataset;
          }
          break;
        case VersionCause::Automated:
          if (parent && parent->ds) {
            const auto plan = CorrectionPlan::from_json(v.config_payload, hp.seed);
            const auto corrected = apply_corrections(plan, *parent->ds);
            ds = corrected.dataset;
            json records = json::array();
            for (const auto& r : corrected.applied) records.push_back(r.to_json());
            if (canonical_dump(records) != canonical_dump(v.corrections)) mismatch("corrections");
          }
          break;
        case VersionCause::Rollback: {
          const auto target_id = v.config_payload.at("version_id").get<std::uint64_t>();
          const SessionVersion* target = session.find(target_id);
          if (target == nullptr || target->version_id >= v.version_id) {
            mismatch("rollback target");
            break;
          }
          if (v.dataset_snapshot_id != target->dataset_snapshot_id) mismatch("snapshot");
          if (v.model_id != target->model_id) mismatch("model");
          if (v.bundle_id != target->bundle_id) mismatch("bundle");
          if (!(v.metrics == target->metrics)) mismatch("metrics");
          ds = replayed.at(target_id).ds;
          break;
        }
      }
    } catch (const std::exception& e) {
      mismatch(std::string("replay failed: ") + e.what());
    }

    if (ds && v.cause != VersionCause::Rollback) {
      const std::optional<double> previous =
          parent ? std::optional<double>(parent->accuracy) : std::nullopt;
      built = train_and_explain(*ds, hp, previous, options.bundle);
      if (ds->snapshot_id() != v.dataset_snapshot_id) mismatch("snapshot");
      if (ds->size() != v.dataset_rows) mismatch("dataset_rows");
      if (sha256_hex(built->trained.model.canonical_bytes()) != v.model_id) mismatch("model");
      if (!(built->trained.metrics == v.metrics)) mismatch("metrics");
      const std::string bytes = built->bundle.canonical_bytes();
      try {
        if (project.get_bundle_bytes(v.bundle_id) != bytes) mismatch("bundle");
      } catch (const std::exception& e) {
        mismatch(std::string("bundle: ") + e.what());
      }
    } else if (!ds) {
      mismatch("dataset");
    }

    try {
      if (ds && project.get_snapshot(v.dataset_snapshot_id) != *ds) mismatch("stored snapshot");
      (void)project.get_model(v.model_id);
    } catch (const std::exception& e) {
      mismatch(std::string("stored object: ") + e.what());
    }

    const double accuracy = v.metrics.holdout_accuracy;
    if (parent) {
      if (!v.accuracy_delta || *v.accuracy_delta != accuracy - parent->accuracy) mismatch("accuracy_delta");
    } else if (v.accuracy_delta) {
      mismatch("accuracy_delta");
    }

    replayed[v.version_id] = {ds, built ? built->trained.metrics.holdout_accuracy : accuracy};
    report.versions.push_back(std::move(check));
  }
  return report;
}

}  // namespace steer
