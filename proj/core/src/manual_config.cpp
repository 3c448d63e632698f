#include "steer/manual_config.hpp"

#include "steer/canonical_json.hpp"

namespace steer {

using nlohmann::json;

ManualConfiguration ManualConfiguration::identity(const Dataset& ds, std::uint64_t base_version) {
  ManualConfiguration cfg;
  for (const auto& f : ds.schema()) cfg.included_features.insert(f.name);
  cfg.base_version = base_version;
  return cfg;
}

json ManualConfiguration::to_json() const {
  json ranges_json = json::object();
  for (const auto& [name, r] : ranges) ranges_json[name] = {{"lo", r.lo}, {"hi", r.hi}};
  return {{"base_version", base_version},
          {"included_features", included_features},
          {"ranges", std::move(ranges_json)}};
}

ManualConfiguration ManualConfiguration::from_json(const json& doc) {
  ManualConfiguration cfg;
  try {
    cfg.base_version = doc.at("base_version").get<std::uint64_t>();
    for (const auto& name : doc.at("included_features")) {
      if (!cfg.included_features.insert(name.get<std::string>()).second) {
        throw Error(ErrorCode::InvalidConfiguration, "feature listed twice in included_features");
      }
    }
    if (doc.contains("ranges")) {
      for (auto it = doc["ranges"].begin(); it != doc["ranges"].end(); ++it) {
        cfg.ranges[it.key()] = {read_real(it.value().at("lo")), read_real(it.value().at("hi"))};
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfiguration, std::string("malformed manual configuration: ") + e.what());
  }
  return cfg;
}

void GuardrailPolicy::validate() const {
  if (!(warn_row_drop_fraction <= max_row_drop_fraction)) {
    throw Error(ErrorCode::InvalidConfiguration, "guardrail warn fraction exceeds max fraction");
  }
}

json GuardrailPolicy::to_json() const {
  return {{"max_row_drop_fraction", max_row_drop_fraction},
          {"min_features", min_features},
          {"min_rows", min_rows},
          {"warn_row_drop_fraction", warn_row_drop_fraction}};
}

json ManualVerdict::to_json() const {
  json warning_list = json::array();
  for (const auto& w : warnings) warning_list.push_back({{"code", w.code}, {"message", w.message}});
  std::string verdict = kind == VerdictKind::Ok ? "ok" : kind == VerdictKind::Warnings ? "warnings" : "rejected";
  json out = {{"verdict", verdict},
              {"warnings", std::move(warning_list)},
              {"rows_before", rows_before},
              {"rows_after", rows_after},
              {"dropped_rows", dropped_rows},
              {"drop_fraction", drop_fraction},
              {"features_after", features_after}};
  if (rejection) {
    out["rejection"] = {{"code", code_name(*rejection)}, {"message", message}};
  }
  return out;
}

namespace {

void check_well_formed(const ManualConfiguration& cfg, const Dataset& ds) {
  for (const auto& name : cfg.included_features) {
    if (!ds.feature_index(name)) {
      throw Error(ErrorCode::UnknownFeature, "unknown feature '" + name + "'", {{"feature", name}});
    }
  }
  for (const auto& [name, range] : cfg.ranges) {
    if (!ds.feature_index(name)) {
      throw Error(ErrorCode::UnknownFeature, "unknown feature '" + name + "'", {{"feature", name}});
    }
    if (cfg.included_features.count(name) == 0) {
      throw Error(ErrorCode::InvalidConfiguration, "range given for excluded feature '" + name + "'",
                  {{"feature", name}});
    }
    if (range.lo > range.hi) {
      throw Error(ErrorCode::InvertedRange, "range lower bound exceeds upper bound for '" + name + "'",
                  {{"feature", name}, {"lo", range.lo}, {"hi", range.hi}});
    }
  }
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
  return buf;
}

}  // namespace

ManualVerdict validate_manual(const ManualConfiguration& cfg, const Dataset& ds,
                              const GuardrailPolicy& policy) {
  policy.validate();
  check_well_formed(cfg, ds);

  ManualVerdict v;
  v.rows_before = ds.size();
  v.features_after = cfg.included_features.size();
  if (!cfg.included_features.empty()) {
    const auto filtered = filter_rows(ds, cfg.ranges);
    v.rows_after = filtered.dataset.size();
    v.dropped_rows = filtered.removed_count;
  }
  v.drop_fraction = ds.size() > 0 ? static_cast<double>(v.dropped_rows) / static_cast<double>(ds.size()) : 0.0;

  auto reject = [&](ErrorCode code, std::string message) {
    v.kind = VerdictKind::Rejected;
    v.rejection = code;
    v.message = std::move(message);
    return v;
  };
  if (v.features_after < policy.min_features) {
    return reject(ErrorCode::GuardrailMinFeatures,
                  "configuration keeps " + std::to_string(v.features_after) + " features; at least " +
                      std::to_string(policy.min_features) + " are required");
  }
  if (v.drop_fraction > policy.max_row_drop_fraction) {
    return reject(ErrorCode::GuardrailMaxRowDrop,
                  "configuration removes " + percent(v.drop_fraction) + " of rows; the limit is " +
                      percent(policy.max_row_drop_fraction));
  }
  if (v.rows_after < policy.min_rows) {
    return reject(ErrorCode::GuardrailMinRows,
                  "configuration leaves " + std::to_string(v.rows_after) + " rows; at least " +
                      std::to_string(policy.min_rows) + " are required");
  }

  if (v.drop_fraction > policy.warn_row_drop_fraction) {
    v.warnings.push_back({"row_drop", "configuration removes " + percent(v.drop_fraction) + " of rows"});
  }
  for (const auto& [name, range] : cfg.ranges) {
    const auto& spec = ds.schema()[*ds.feature_index(name)];
    const bool below = spec.plausible_min && range.lo < *spec.plausible_min;
    const bool above = spec.plausible_max && range.hi > *spec.plausible_max;
    if (below || above) {
      v.warnings.push_back({"outside_plausible_range",
                            "range for '" + name + "' extends beyond its plausible values"});
    }
  }
  v.kind = v.warnings.empty() ? VerdictKind::Ok : VerdictKind::Warnings;
  return v;
}

Dataset apply_manual(const ManualConfiguration& cfg, const Dataset& ds, const GuardrailPolicy& policy) {
  const auto verdict = validate_manual(cfg, ds, policy);
  if (verdict.kind == VerdictKind::Rejected) {
    throw Error(*verdict.rejection, verdict.message, verdict.to_json());
  }
  const Dataset projected = project_features(ds, cfg.included_features);
  return filter_rows(projected, cfg.ranges).dataset;
}

}  // namespace steer
