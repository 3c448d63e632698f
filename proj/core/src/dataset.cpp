#include "steer/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "steer/canonical_json.hpp"
#include "steer/csv.hpp"
#include "steer/error.hpp"

namespace steer {

using nlohmann::json;

std::string_view kind_name(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::Numeric: return "numeric";
    case FeatureKind::Binary: return "binary";
    case FeatureKind::Categorical: return "categorical";
  }
  return "numeric";
}

namespace {

FeatureKind parse_kind(const std::string& s) {
  if (s == "numeric") return FeatureKind::Numeric;
  if (s == "binary") return FeatureKind::Binary;
  if (s == "categorical") return FeatureKind::Categorical;
  throw Error(ErrorCode::InvalidSchema, "unknown feature kind '" + s + "'");
}

std::optional<double> optional_real(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw Error(ErrorCode::InvalidSchema, std::string("'") + key + "' must be a number or null");
  }
  return it->get<double>();
}

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void validate_schema(const std::vector<FeatureSpec>& schema, const TargetSpec& target) {
  std::unordered_set<std::string> names;
  for (const auto& f : schema) {
    if (f.name.empty()) throw Error(ErrorCode::InvalidSchema, "feature name must be non-empty");
    if (!names.insert(f.name).second) {
      throw Error(ErrorCode::InvalidSchema, "duplicate feature name '" + f.name + "'");
    }
    if (f.plausible_min && f.plausible_max && *f.plausible_min > *f.plausible_max) {
      throw Error(ErrorCode::InvalidSchema, "plausible_min > plausible_max for '" + f.name + "'");
    }
  }
  if (target.name.empty()) throw Error(ErrorCode::InvalidSchema, "target name must be non-empty");
  if (names.count(target.name) != 0) {
    throw Error(ErrorCode::InvalidSchema, "target '" + target.name + "' is also a feature");
  }
  if (target.labels.size() != 2 || target.labels[0] == target.labels[1]) {
    throw Error(ErrorCode::InvalidSchema, "target must declare exactly two distinct labels");
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

SchemaDocument SchemaDocument::from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array() ||
      !doc.contains("target") || !doc["target"].is_object()) {
    throw Error(ErrorCode::InvalidSchema, "schema document needs 'features' array and 'target' object");
  }
  SchemaDocument out;
  try {
    for (const auto& f : doc["features"]) {
      FeatureSpec spec;
      spec.name = f.at("name").get<std::string>();
      spec.kind = parse_kind(f.value("kind", std::string("numeric")));
      if (f.contains("unit") && !f["unit"].is_null()) spec.unit = f["unit"].get<std::string>();
      spec.actionable = f.value("actionable", false);
      spec.plausible_min = optional_real(f, "plausible_min");
      spec.plausible_max = optional_real(f, "plausible_max");
      spec.zero_is_missing = f.value("zero_is_missing", false);
      spec.display_label = f.value("display_label", spec.name);
      out.features.push_back(std::move(spec));
    }
    const auto& t = doc["target"];
    out.target.name = t.at("name").get<std::string>();
    out.target.labels = t.at("labels").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSchema, std::string("malformed schema document: ") + e.what());
  }
  if (out.features.empty()) throw Error(ErrorCode::InvalidSchema, "schema declares no features");
  validate_schema(out.features, out.target);
  return out;
}

json SchemaDocument::to_json() const {
  json features = json::array();
  for (const auto& f : this->features) {
    features.push_back({{"name", f.name},
                        {"kind", kind_name(f.kind)},
                        {"unit", f.unit ? json(*f.unit) : json(nullptr)},
                        {"actionable", f.actionable},
                        {"plausible_min", optional_to_json(f.plausible_min)},
                        {"plausible_max", optional_to_json(f.plausible_max)},
                        {"zero_is_missing", f.zero_is_missing},
                        {"display_label", f.display_label}});
  }
  return {{"features", std::move(features)},
          {"target", {{"name", target.name}, {"labels", target.labels}}}};
}

Dataset::Dataset(std::vector<FeatureSpec> schema, TargetSpec target, std::vector<Instance> rows)
    : schema_(std::move(schema)), target_(std::move(target)), rows_(std::move(rows)) {
  validate_schema(schema_, target_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].values.size() != schema_.size()) {
      throw Error(ErrorCode::DimensionMismatch, "row has wrong number of values",
                  {{"row", r}, {"expected", schema_.size()}, {"got", rows_[r].values.size()}});
    }
    if (rows_[r].label < 0 || rows_[r].label > 1) {
      throw Error(ErrorCode::UnknownLabel, "row label index out of range", {{"row", r}});
    }
  }
  snapshot_id_ = sha256_hex(canonical_bytes());
}

std::optional<std::size_t> Dataset::feature_index(std::string_view name) const noexcept {
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    if (schema_[j].name == name) return j;
  }
  return std::nullopt;
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> names;
  names.reserve(schema_.size());
  for (const auto& f : schema_) names.push_back(f.name);
  return names;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(target_.labels.size(), 0);
  for (const auto& row : rows_) ++counts[static_cast<std::size_t>(row.label)];
  return counts;
}

Dataset Dataset::with_rows(std::vector<Instance> rows) const {
  return Dataset(schema_, target_, std::move(rows));
}

json Dataset::to_json() const {
  SchemaDocument doc{schema_, target_};
  json rows = json::array();
  for (const auto& row : rows_) {
    json r = json::array();
    for (const auto& v : row.values) r.push_back(v ? json(*v) : json(nullptr));
    r.push_back(row.label);
    rows.push_back(std::move(r));
  }
  json out = doc.to_json();
  out["v"] = 1;
  out["rows"] = std::move(rows);
  return out;
}

Dataset Dataset::from_json(const json& doc) {
  const SchemaDocument schema = SchemaDocument::from_json(doc);
  std::vector<Instance> rows;
  try {
    const auto& raw = doc.at("rows");
    rows.reserve(raw.size());
    for (const auto& r : raw) {
      if (!r.is_array() || r.size() != schema.features.size() + 1) {
        throw Error(ErrorCode::DimensionMismatch, "serialized row has wrong arity");
      }
      Instance inst;
      inst.values.reserve(schema.features.size());
      for (std::size_t j = 0; j < schema.features.size(); ++j) {
        inst.values.push_back(r[j].is_null() ? Cell{} : Cell{r[j].get<double>()});
      }
      inst.label = r.back().get<int>();
      rows.push_back(std::move(inst));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSchema, std::string("malformed dataset document: ") + e.what());
  }
  return Dataset(schema.features, schema.target, std::move(rows));
}

std::string Dataset::canonical_bytes() const { return canonical_dump(to_json()); }

Dataset ingest_csv(std::string_view csv_text, const SchemaDocument& schema) {
  const auto records = csv::parse(csv_text);
  if (records.empty()) throw Error(ErrorCode::EmptyFile, "CSV has no header row");

  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < records[0].size(); ++c) {
    column_of.emplace(std::string(trim(records[0][c])), c);
  }
  auto locate = [&](const std::string& name) {
    const auto it = column_of.find(name);
    if (it == column_of.end()) {
      throw Error(ErrorCode::MissingColumn, "CSV lacks column '" + name + "'", {{"column", name}});
    }
    return it->second;
  };
  std::vector<std::size_t> feature_columns;
  for (const auto& f : schema.features) feature_columns.push_back(locate(f.name));
  const std::size_t target_column = locate(schema.target.name);

  if (records.size() < 2) throw Error(ErrorCode::EmptyFile, "CSV has a header but no data rows");

  std::vector<Instance> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    auto cell = [&](std::size_t c) -> std::string_view {
      return c < rec.size() ? trim(rec[c]) : std::string_view{};
    };
    Instance inst;
    inst.values.reserve(feature_columns.size());
    for (std::size_t j = 0; j < feature_columns.size(); ++j) {
      const auto text = cell(feature_columns[j]);
      if (text.empty()) {
        inst.values.emplace_back();
        continue;
      }
      const auto value = parse_number(text);
      if (!value) {
        throw Error(ErrorCode::UnparseableCell, "cannot parse numeric cell",
                    {{"row", r}, {"column", schema.features[j].name}, {"text", std::string(text)}});
      }
      if (schema.features[j].zero_is_missing && *value == 0.0) {
        inst.values.emplace_back();
      } else {
        inst.values.emplace_back(*value);
      }
    }
    const auto label_text = cell(target_column);
    const auto& labels = schema.target.labels;
    const auto it = std::find(labels.begin(), labels.end(), label_text);
    if (it == labels.end()) {
      throw Error(ErrorCode::UnknownLabel, "target value not among declared labels",
                  {{"row", r}, {"text", std::string(label_text)}});
    }
    inst.label = static_cast<int>(it - labels.begin());
    rows.push_back(std::move(inst));
  }
  return Dataset(schema.features, schema.target, std::move(rows));
}

std::string to_csv(const Dataset& ds) {
  std::string out;
  for (const auto& f : ds.schema()) {
    out += csv::escape(f.name);
    out += ',';
  }
  out += csv::escape(ds.target().name);
  out += '\n';
  for (const auto& row : ds.rows()) {
    for (const auto& v : row.values) {
      if (v) out += format_real(*v);
      out += ',';
    }
    out += csv::escape(ds.target().labels[static_cast<std::size_t>(row.label)]);
    out += '\n';
  }
  return out;
}

FilterResult filter_rows(const Dataset& ds, const RangeMap& ranges) {
  std::vector<std::pair<std::size_t, ValueRange>> keyed;
  for (const auto& [name, range] : ranges) {
    const auto j = ds.feature_index(name);
    if (!j) throw Error(ErrorCode::UnknownFeature, "unknown feature '" + name + "'", {{"feature", name}});
    if (ds.schema()[*j].kind == FeatureKind::Categorical) {
      throw Error(ErrorCode::InvalidConfiguration, "range filter on categorical feature '" + name + "'",
                  {{"feature", name}});
    }
    if (range.lo > range.hi) {
      throw Error(ErrorCode::InvertedRange, "range lower bound exceeds upper bound for '" + name + "'",
                  {{"feature", name}, {"lo", range.lo}, {"hi", range.hi}});
    }
    keyed.emplace_back(*j, range);
  }
  std::vector<Instance> kept;
  kept.reserve(ds.size());
  for (const auto& row : ds.rows()) {
    const bool keep = std::all_of(keyed.begin(), keyed.end(), [&](const auto& k) {
      const auto& v = row.values[k.first];
      return !v || k.second.contains(*v);
    });
    if (keep) kept.push_back(row);
  }
  const std::size_t removed = ds.size() - kept.size();
  return {ds.with_rows(std::move(kept)), removed};
}

Dataset project_features(const Dataset& ds, const std::set<std::string>& included) {
  if (included.empty()) throw Error(ErrorCode::EmptySelection, "feature selection is empty");
  for (const auto& name : included) {
    if (!ds.feature_index(name)) {
      throw Error(ErrorCode::UnknownFeature, "unknown feature '" + name + "'", {{"feature", name}});
    }
  }
  std::vector<std::size_t> keep;
  std::vector<FeatureSpec> schema;
  for (std::size_t j = 0; j < ds.n_features(); ++j) {
    if (included.count(ds.schema()[j].name) != 0) {
      keep.push_back(j);
      schema.push_back(ds.schema()[j]);
    }
  }
  std::vector<Instance> rows;
  rows.reserve(ds.size());
  for (const auto& row : ds.rows()) {
    Instance inst;
    inst.label = row.label;
    inst.values.reserve(keep.size());
    for (auto j : keep) inst.values.push_back(row.values[j]);
    rows.push_back(std::move(inst));
  }
  return Dataset(std::move(schema), ds.target(), std::move(rows));
}

Dataset select_rows(const Dataset& ds, std::span<const std::size_t> positions) {
  std::vector<Instance> rows;
  rows.reserve(positions.size());
  for (auto p : positions) rows.push_back(ds.rows().at(p));
  return ds.with_rows(std::move(rows));
}

}  // namespace steer
