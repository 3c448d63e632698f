#include "steer/corrections.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "steer/data_insights.hpp"
#include "steer/error.hpp"
#include "steer/random.hpp"

namespace steer {

using nlohmann::json;

std::string_view issue_name(IssueKind kind) noexcept {
  switch (kind) {
    case IssueKind::Duplicates: return "duplicates";
    case IssueKind::DisguisedMissing: return "disguised_missing";
    case IssueKind::Outliers: return "outliers";
    case IssueKind::ClassImbalance: return "class_imbalance";
  }
  return "duplicates";
}

IssueKind parse_issue_kind(std::string_view name) {
  for (auto kind : kAllIssueKinds) {
    if (issue_name(kind) == name) return kind;
  }
  throw Error(ErrorCode::UnknownKind, "unknown issue kind '" + std::string(name) + "'",
              {{"kind", std::string(name)}});
}

namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
  return buf;
}

std::string fixed(double value, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::vector<std::pair<std::string, FeatureSummary>> summarize(const Dataset& ds) {
  std::vector<std::pair<std::string, FeatureSummary>> out;
  for (std::size_t j = 0; j < ds.n_features(); ++j) {
    FeatureSummary s;
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : ds.rows()) {
      const auto& v = row.values[j];
      if (!v) {
        ++s.missing_count;
        continue;
      }
      sum += *v;
      ++n;
      s.min = s.min ? std::min(*s.min, *v) : *v;
      s.max = s.max ? std::max(*s.max, *v) : *v;
    }
    if (n > 0) s.mean = sum / static_cast<double>(n);
    out.emplace_back(ds.schema()[j].name, s);
  }
  return out;
}

struct StepOutput {
  Dataset dataset;
  std::size_t cells_changed = 0;
};

StepOutput drop_duplicates(const Dataset& ds) {
  const auto mask = duplicate_mask(ds);
  std::vector<Instance> rows;
  rows.reserve(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (!mask[r]) rows.push_back(ds.rows()[r]);
  }
  return {ds.with_rows(std::move(rows)), 0};
}

StepOutput impute_medians(const Dataset& ds) {
  std::vector<Instance> rows = ds.rows();
  std::size_t changed = 0;
  for (std::size_t j = 0; j < ds.n_features(); ++j) {
    std::vector<double> observed;
    bool any_missing = false;
    for (const auto& row : rows) {
      if (row.values[j]) {
        observed.push_back(*row.values[j]);
      } else {
        any_missing = true;
      }
    }
    if (!any_missing || observed.empty()) continue;
    std::sort(observed.begin(), observed.end());
    const double median = quantile_linear(observed, 0.5);
    for (auto& row : rows) {
      if (!row.values[j]) {
        row.values[j] = median;
        ++changed;
      }
    }
  }
  return {ds.with_rows(std::move(rows)), changed};
}

StepOutput winsorize(const Dataset& ds) {
  std::vector<Instance> rows = ds.rows();
  std::size_t changed = 0;
  for (std::size_t j = 0; j < ds.n_features(); ++j) {
    const auto fences = tukey_fences(ds, j);
    if (!fences) continue;
    for (auto& row : rows) {
      auto& v = row.values[j];
      if (!v || !fences->outside(*v)) continue;
      v = std::clamp(*v, fences->lower, fences->upper);
      ++changed;
    }
  }
  return {ds.with_rows(std::move(rows)), changed};
}

StepOutput oversample_minority(const Dataset& ds, std::uint64_t seed) {
  const auto counts = ds.class_counts();
  if (counts[0] == counts[1]) return {ds, 0};
  const int minority = counts[0] < counts[1] ? 0 : 1;
  const std::size_t deficit = std::max(counts[0], counts[1]) - std::min(counts[0], counts[1]);

  std::vector<std::size_t> members;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (ds.rows()[r].label == minority) members.push_back(r);
  }
  if (members.empty()) {
    throw Error(ErrorCode::SingleClassData, "cannot oversample a class with no rows");
  }
  auto rng = SplitMix64::derive(seed, Stream::Oversampling);
  std::vector<Instance> rows = ds.rows();
  rows.reserve(ds.size() + deficit);
  for (std::size_t k = 0; k < deficit; ++k) {
    rows.push_back(ds.rows()[members[static_cast<std::size_t>(rng.uniform_index(members.size()))]]);
  }
  return {ds.with_rows(std::move(rows)), 0};
}

StepOutput apply_one(IssueKind kind, const Dataset& ds, std::uint64_t seed) {
  switch (kind) {
    case IssueKind::Duplicates: return drop_duplicates(ds);
    case IssueKind::DisguisedMissing: return impute_medians(ds);
    case IssueKind::Outliers: return winsorize(ds);
    case IssueKind::ClassImbalance: return oversample_minority(ds, seed);
  }
  throw Error(ErrorCode::UnknownKind, "unknown issue kind");
}

DataIssue describe(IssueKind kind, const Dataset& ds, const DataQualityReport& q) {
  DataIssue issue;
  issue.kind = kind;
  switch (kind) {
    case IssueKind::Duplicates:
      issue.affected_fraction = q.duplicate_row_fraction;
      issue.description = std::to_string(q.duplicate_rows) + " rows (" + percent(q.duplicate_row_fraction) +
                          ") exactly repeat an earlier row.";
      issue.correction_summary = "Remove repeated rows, keeping the first occurrence of each.";
      break;
    case IssueKind::DisguisedMissing: {
      issue.affected_fraction = q.missing_cell_fraction;
      std::size_t flagged = 0;
      for (const auto& f : q.features) {
        if (f.missing_count == 0) continue;
        issue.affected_per_feature[f.feature] = f.missing_fraction;
        ++flagged;
      }
      issue.description = percent(q.missing_cell_fraction) + " of cells are missing or zero-coded, across " +
                          std::to_string(flagged) + " features.";
      issue.correction_summary = "Fill each missing cell with the median of the observed values of its feature.";
      break;
    }
    case IssueKind::Outliers: {
      issue.affected_fraction = q.outlier_cell_fraction;
      std::size_t flagged = 0;
      for (const auto& f : q.features) {
        if (f.outlier_count == 0) continue;
        issue.affected_per_feature[f.feature] = f.outlier_fraction;
        ++flagged;
      }
      issue.description = percent(q.outlier_cell_fraction) +
                          " of observed cells lie outside the 1.5 IQR fences, across " +
                          std::to_string(flagged) + " features.";
      issue.correction_summary = "Clamp out-of-fence values to the nearest fence; no rows are removed.";
      break;
    }
    case IssueKind::ClassImbalance: {
      issue.affected_fraction = 1.0 - q.class_balance;
      const auto& labels = ds.target().labels;
      const int minority = q.class_counts[0] < q.class_counts[1] ? 0 : 1;
      const auto majority_count = std::max(q.class_counts[0], q.class_counts[1]);
      issue.description = "Class balance is " + fixed(q.class_balance, 3) + ": " +
                          std::to_string(q.class_counts[0]) + " '" + labels[0] + "' vs " +
                          std::to_string(q.class_counts[1]) + " '" + labels[1] + "'.";
      issue.correction_summary = "Resample '" + labels[static_cast<std::size_t>(minority)] +
                                 "' rows with replacement until both classes have " +
                                 std::to_string(majority_count) + " rows.";
      break;
    }
  }
  return issue;
}

}  // namespace

bool issue_present(const Dataset& ds, IssueKind kind) {
  const auto q = data_quality(ds);
  switch (kind) {
    case IssueKind::Duplicates: return q.duplicate_rows > 0;
    case IssueKind::DisguisedMissing: return q.missing_cells > 0;
    case IssueKind::Outliers: return q.outlier_cells > 0;
    case IssueKind::ClassImbalance: return q.class_balance < kImbalanceThreshold;
  }
  return false;
}

json DataIssue::to_json() const {
  return {{"kind", issue_name(kind)},
          {"affected_fraction", affected_fraction},
          {"affected_per_feature", affected_per_feature},
          {"description", description},
          {"estimated_accuracy_impact", estimated_accuracy_impact},
          {"baseline_accuracy", baseline_accuracy},
          {"corrected_accuracy", corrected_accuracy},
          {"correction_summary", correction_summary}};
}

std::vector<DataIssue> detect_issues(const Dataset& ds, const Hyperparameters& hp) {
  const auto q = data_quality(ds);
  std::vector<DataIssue> issues;
  std::optional<double> baseline;
  for (auto kind : kAllIssueKinds) {
    if (!issue_present(ds, kind)) continue;
    if (!baseline) baseline = train(ds, hp).metrics.holdout_accuracy;
    DataIssue issue = describe(kind, ds, q);
    CorrectionPlan plan{{kind}, 0, hp.seed};
    const auto corrected = apply_corrections(plan, ds);
    issue.baseline_accuracy = *baseline;
    issue.corrected_accuracy = train(corrected.dataset, hp).metrics.holdout_accuracy;
    issue.estimated_accuracy_impact = issue.corrected_accuracy - issue.baseline_accuracy;
    issues.push_back(std::move(issue));
  }
  std::stable_sort(issues.begin(), issues.end(), [](const DataIssue& a, const DataIssue& b) {
    return std::abs(a.estimated_accuracy_impact) > std::abs(b.estimated_accuracy_impact);
  });
  return issues;
}

void CorrectionPlan::validate() const {
  if (selected_kinds.empty()) throw Error(ErrorCode::InvalidPlan, "correction plan selects no issues");
  std::set<IssueKind> seen;
  for (auto k : selected_kinds) {
    if (!seen.insert(k).second) {
      throw Error(ErrorCode::InvalidPlan, "issue kind selected twice", {{"kind", issue_name(k)}});
    }
  }
}

json CorrectionPlan::to_json() const {
  json kinds = json::array();
  for (auto k : selected_kinds) kinds.push_back(issue_name(k));
  return {{"selected_kinds", std::move(kinds)}, {"base_version", base_version}, {"seed", seed}};
}

CorrectionPlan CorrectionPlan::from_json(const json& doc, std::uint64_t default_seed) {
  CorrectionPlan plan;
  try {
    plan.base_version = doc.at("base_version").get<std::uint64_t>();
    for (const auto& k : doc.at("selected_kinds")) {
      plan.selected_kinds.push_back(parse_issue_kind(k.get<std::string>()));
    }
    plan.seed = doc.value("seed", default_seed);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidPlan, std::string("malformed correction plan: ") + e.what());
  }
  plan.validate();
  return plan;
}

json FeatureSummary::to_json() const {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"mean", opt(mean)}, {"min", opt(min)}, {"max", opt(max)}, {"missing_count", missing_count}};
}

json CorrectionRecord::to_json() const {
  auto side = [](const std::vector<std::pair<std::string, FeatureSummary>>& s) {
    json out = json::array();
    for (const auto& [name, summary] : s) {
      json entry = summary.to_json();
      entry["feature"] = name;
      out.push_back(std::move(entry));
    }
    return out;
  };
  return {{"kind", issue_name(kind)},
          {"rows_before", rows_before},
          {"rows_after", rows_after},
          {"cells_changed", cells_changed},
          {"before", side(before)},
          {"after", side(after)}};
}

CorrectionResult apply_corrections(const CorrectionPlan& plan, const Dataset& ds) {
  plan.validate();
  for (auto kind : plan.selected_kinds) {
    if (!issue_present(ds, kind)) {
      throw Error(ErrorCode::StaleIssue, "issue '" + std::string(issue_name(kind)) + "' is not present",
                  {{"kind", issue_name(kind)}});
    }
  }
  CorrectionResult result{ds, {}};
  for (auto kind : kAllIssueKinds) {
    if (std::find(plan.selected_kinds.begin(), plan.selected_kinds.end(), kind) == plan.selected_kinds.end()) {
      continue;
    }
    CorrectionRecord record;
    record.kind = kind;
    record.rows_before = result.dataset.size();
    record.before = summarize(result.dataset);
    auto step = apply_one(kind, result.dataset, plan.seed);
    record.rows_after = step.dataset.size();
    record.cells_changed = step.cells_changed;
    record.after = summarize(step.dataset);
    result.dataset = std::move(step.dataset);
    result.applied.push_back(std::move(record));
  }
  return result;
}

}  // namespace steer
