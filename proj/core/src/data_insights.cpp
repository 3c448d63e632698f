#include "steer/data_insights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "steer/error.hpp"

namespace steer {

using nlohmann::json;

double quantile_linear(std::span<const double> sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

namespace {

std::vector<double> observed_values(const Dataset& ds, std::size_t j) {
  std::vector<double> values;
  values.reserve(ds.size());
  for (const auto& row : ds.rows()) {
    if (row.values[j]) values.push_back(*row.values[j]);
  }
  return values;
}

json fences_to_json(const std::optional<TukeyFences>& f) {
  if (!f) return nullptr;
  return {{"q1", f->q1}, {"q3", f->q3}, {"lower", f->lower}, {"upper", f->upper}};
}

}  // namespace

std::optional<TukeyFences> tukey_fences(const Dataset& ds, std::size_t j) {
  if (ds.schema()[j].kind != FeatureKind::Numeric) return std::nullopt;
  auto values = observed_values(ds, j);
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  TukeyFences f;
  f.q1 = quantile_linear(values, 0.25);
  f.q3 = quantile_linear(values, 0.75);
  const double iqr = f.q3 - f.q1;
  f.lower = f.q1 - 1.5 * iqr;
  f.upper = f.q3 + 1.5 * iqr;
  return f;
}

std::vector<bool> duplicate_mask(const Dataset& ds) {
  std::set<std::pair<std::vector<Cell>, int>> seen;
  std::vector<bool> mask(ds.size(), false);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto& row = ds.rows()[r];
    mask[r] = !seen.emplace(row.values, row.label).second;
  }
  return mask;
}

std::string_view direction_name(InsightDirection d) noexcept {
  switch (d) {
    case InsightDirection::HigherInPositive: return "higher_in_positive";
    case InsightDirection::HigherInNegative: return "higher_in_negative";
    case InsightDirection::Similar: return "similar";
  }
  return "similar";
}

json KeyInsight::to_json() const {
  return {{"feature", feature},
          {"display_label", display_label},
          {"unit", unit},
          {"class_means", {class_means[0], class_means[1]}},
          {"class_counts", {class_counts[0], class_counts[1]}},
          {"standardized_mean_difference", standardized_mean_difference},
          {"direction", direction_name(direction)}};
}

std::vector<KeyInsight> key_insights(const Dataset& ds) {
  const auto counts = ds.class_counts();
  if (counts[0] == 0 || counts[1] == 0) {
    throw Error(ErrorCode::SingleClassData, "key insights need both classes present");
  }
  std::vector<KeyInsight> out;
  for (std::size_t j = 0; j < ds.n_features(); ++j) {
    const auto& spec = ds.schema()[j];
    if (spec.kind == FeatureKind::Categorical) continue;

    std::array<std::vector<double>, 2> by_class;
    for (const auto& row : ds.rows()) {
      if (row.values[j]) by_class[static_cast<std::size_t>(row.label)].push_back(*row.values[j]);
    }
    if (by_class[0].empty() || by_class[1].empty()) continue;

    KeyInsight insight;
    insight.feature = spec.name;
    insight.display_label = spec.display_label;
    insight.unit = spec.unit.value_or("");
    double pooled_ss = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
      const auto& v = by_class[c];
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      insight.class_means[c] = mean;
      insight.class_counts[c] = v.size();
      for (double x : v) pooled_ss += (x - mean) * (x - mean);
    }
    const double dof = static_cast<double>(by_class[0].size() + by_class[1].size()) - 2.0;
    const double pooled_sd = dof > 0.0 ? std::sqrt(pooled_ss / dof) : 0.0;
    const double diff = insight.class_means[1] - insight.class_means[0];

    if (pooled_sd > 0.0) {
      insight.standardized_mean_difference = diff / pooled_sd;
    } else if (diff != 0.0) {
      insight.standardized_mean_difference = diff > 0 ? std::numeric_limits<double>::infinity()
                                                      : -std::numeric_limits<double>::infinity();
    }
    const double smd = insight.standardized_mean_difference;
    if (std::abs(smd) < kSimilarSmdThreshold) {
      insight.direction = InsightDirection::Similar;
    } else {
      insight.direction = smd > 0 ? InsightDirection::HigherInPositive : InsightDirection::HigherInNegative;
    }
    out.push_back(std::move(insight));
  }
  std::stable_sort(out.begin(), out.end(), [](const KeyInsight& a, const KeyInsight& b) {
    return std::abs(a.standardized_mean_difference) > std::abs(b.standardized_mean_difference);
  });
  return out;
}

json DensityDistribution::to_json() const {
  return {{"feature", feature},
          {"display_label", display_label},
          {"bin_edges", bin_edges},
          {"counts_per_class", {counts_per_class[0], counts_per_class[1]}},
          {"missing_count", missing_count}};
}

std::vector<DensityDistribution> density_distributions(const Dataset& ds) {
  std::vector<DensityDistribution> out;
  out.reserve(ds.n_features());
  for (std::size_t j = 0; j < ds.n_features(); ++j) {
    DensityDistribution d;
    d.feature = ds.schema()[j].name;
    d.display_label = ds.schema()[j].display_label;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& row : ds.rows()) {
      if (!row.values[j]) {
        ++d.missing_count;
        continue;
      }
      lo = std::min(lo, *row.values[j]);
      hi = std::max(hi, *row.values[j]);
    }
    if (d.missing_count == ds.size()) {
      out.push_back(std::move(d));
      continue;
    }

    if (lo == hi) {
      d.bin_edges = {lo, hi};
      d.counts_per_class = {std::vector<std::size_t>(1, 0), std::vector<std::size_t>(1, 0)};
      for (const auto& row : ds.rows()) {
        if (row.values[j]) ++d.counts_per_class[static_cast<std::size_t>(row.label)][0];
      }
      out.push_back(std::move(d));
      continue;
    }

    d.bin_edges.resize(kHistogramBins + 1);
    for (std::size_t k = 0; k <= kHistogramBins; ++k) {
      d.bin_edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(kHistogramBins);
    }
    d.bin_edges.back() = hi;
    d.counts_per_class = {std::vector<std::size_t>(kHistogramBins, 0),
                          std::vector<std::size_t>(kHistogramBins, 0)};
    // Bin k holds [edge_k, edge_k+1); the last bin also holds the maximum.
    const auto interior_begin = d.bin_edges.begin() + 1;
    const auto interior_end = d.bin_edges.end() - 1;
    for (const auto& row : ds.rows()) {
      if (!row.values[j]) continue;
      const auto bin = static_cast<std::size_t>(
          std::upper_bound(interior_begin, interior_end, *row.values[j]) - interior_begin);
      ++d.counts_per_class[static_cast<std::size_t>(row.label)][bin];
    }
    out.push_back(std::move(d));
  }
  return out;
}

json DataQualityReport::to_json() const {
  json per_feature = json::array();
  for (const auto& f : features) {
    per_feature.push_back({{"feature", f.feature},
                           {"missing_count", f.missing_count},
                           {"outlier_count", f.outlier_count},
                           {"observed_count", f.observed_count},
                           {"missing_fraction", f.missing_fraction},
                           {"outlier_fraction", f.outlier_fraction},
                           {"fences", fences_to_json(f.fences)}});
  }
  return {{"completeness", completeness},
          {"outlier_cleanliness", outlier_cleanliness},
          {"uniqueness", uniqueness},
          {"class_balance", class_balance},
          {"composite", composite},
          {"rows", rows},
          {"total_cells", total_cells},
          {"missing_cells", missing_cells},
          {"observed_cells", observed_cells},
          {"outlier_cells", outlier_cells},
          {"duplicate_rows", duplicate_rows},
          {"class_counts", {class_counts[0], class_counts[1]}},
          {"missing_cell_fraction", missing_cell_fraction},
          {"outlier_cell_fraction", outlier_cell_fraction},
          {"duplicate_row_fraction", duplicate_row_fraction},
          {"features", std::move(per_feature)}};
}

DataQualityReport data_quality(const Dataset& ds) {
  DataQualityReport q;
  q.rows = ds.size();
  q.total_cells = ds.size() * ds.n_features();
  for (std::size_t j = 0; j < ds.n_features(); ++j) {
    FeatureQuality f;
    f.feature = ds.schema()[j].name;
    f.fences = tukey_fences(ds, j);
    for (const auto& row : ds.rows()) {
      const auto& v = row.values[j];
      if (!v) {
        ++f.missing_count;
        continue;
      }
      ++f.observed_count;
      if (f.fences && f.fences->outside(*v)) ++f.outlier_count;
    }
    f.missing_fraction = ds.size() > 0 ? static_cast<double>(f.missing_count) / static_cast<double>(ds.size()) : 0.0;
    f.outlier_fraction = f.observed_count > 0
                             ? static_cast<double>(f.outlier_count) / static_cast<double>(f.observed_count)
                             : 0.0;
    q.missing_cells += f.missing_count;
    q.observed_cells += f.observed_count;
    q.outlier_cells += f.outlier_count;
    q.features.push_back(std::move(f));
  }
  const auto mask = duplicate_mask(ds);
  q.duplicate_rows = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  const auto counts = ds.class_counts();
  q.class_counts = {counts[0], counts[1]};

  auto ratio = [](std::size_t num, std::size_t den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
  };
  q.missing_cell_fraction = ratio(q.missing_cells, q.total_cells);
  q.outlier_cell_fraction = ratio(q.outlier_cells, q.observed_cells);
  q.duplicate_row_fraction = ratio(q.duplicate_rows, q.rows);

  q.completeness = 1.0 - q.missing_cell_fraction;
  q.outlier_cleanliness = 1.0 - q.outlier_cell_fraction;
  q.uniqueness = 1.0 - q.duplicate_row_fraction;
  const auto [min_c, max_c] = std::minmax(counts[0], counts[1]);
  q.class_balance = ratio(min_c, max_c);
  q.composite = (q.completeness + q.outlier_cleanliness + q.uniqueness + q.class_balance) / 4.0;
  return q;
}

}  // namespace steer
