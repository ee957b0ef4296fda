#include "bayesnid/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "bayesnid/error.hpp"

namespace bayesnid {

ContingencyTable ContingencyTable::from_ids(std::span<const std::size_t> row_ids,
                                            std::span<const ClassId> col_ids) {
  if (row_ids.size() != col_ids.size()) {
    throw Error(ErrorCode::LengthMismatch, "bin ids and class ids differ in length");
  }
  ContingencyTable table;
  if (row_ids.empty()) return table;
  const std::size_t rows = *std::max_element(row_ids.begin(), row_ids.end()) + 1;
  const std::size_t cols = *std::max_element(col_ids.begin(), col_ids.end()) + 1;
  table.observed.assign(rows, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < row_ids.size(); ++i) table.observed[row_ids[i]][col_ids[i]] += 1.0;
  return table;
}

std::vector<double> ContingencyTable::row_totals() const {
  std::vector<double> totals;
  totals.reserve(observed.size());
  for (const auto& row : observed) totals.push_back(std::accumulate(row.begin(), row.end(), 0.0));
  return totals;
}

std::vector<double> ContingencyTable::col_totals() const {
  std::vector<double> totals(col_count(), 0.0);
  for (const auto& row : observed) {
    for (std::size_t j = 0; j < row.size(); ++j) totals[j] += row[j];
  }
  return totals;
}

double ContingencyTable::grand_total() const {
  const auto totals = row_totals();
  return std::accumulate(totals.begin(), totals.end(), 0.0);
}

ContingencyTable ContingencyTable::transposed() const {
  ContingencyTable out;
  out.observed.assign(col_count(), std::vector<double>(row_count(), 0.0));
  for (std::size_t i = 0; i < row_count(); ++i) {
    for (std::size_t j = 0; j < col_count(); ++j) out.observed[j][i] = observed[i][j];
  }
  return out;
}

ChiSquareResult chi_square_statistic(const ContingencyTable& table) {
  for (const auto& row : table.observed) {
    if (row.size() != table.col_count()) {
      throw Error(ErrorCode::DimensionMismatch, "contingency table is not rectangular");
    }
    for (double o : row) {
      if (!(o >= 0.0) || !std::isfinite(o)) {
        throw Error(ErrorCode::InvalidArgument, "contingency counts must be finite and >= 0");
      }
    }
  }
  const auto row_totals = table.row_totals();
  const auto col_totals = table.col_totals();

  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < row_totals.size(); ++i) {
    if (row_totals[i] > 0.0) rows.push_back(i);
  }
  for (std::size_t j = 0; j < col_totals.size(); ++j) {
    if (col_totals[j] > 0.0) cols.push_back(j);
  }

  ChiSquareResult result;
  if (rows.size() < 2 || cols.size() < 2) {
    result.degenerate = true;
    return result;
  }

  const double grand = table.grand_total();
  double statistic = 0.0;
  for (std::size_t i : rows) {
    for (std::size_t j : cols) {
      const double expected = row_totals[i] * col_totals[j] / grand;
      const double diff = table.observed[i][j] - expected;
      statistic += diff * diff / expected;
    }
  }
  result.statistic = statistic;
  result.dof = (rows.size() - 1) * (cols.size() - 1);
  return result;
}

std::vector<std::size_t> bin_continuous(std::span<const double> column, std::size_t bins) {
  std::vector<std::size_t> ids(column.size(), 0);
  if (column.empty() || bins <= 1) return ids;

  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  std::vector<double> edges;
  edges.reserve(bins - 1);
  for (std::size_t j = 1; j < bins; ++j) {
    const double pos = static_cast<double>(j) * static_cast<double>(n - 1) / static_cast<double>(bins);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    const double edge =
        lo + 1 < n ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
    edges.push_back(edge);
  }
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // Raw bin = number of cut points strictly below the value.
  std::vector<std::size_t> raw(column.size());
  std::vector<bool> used(edges.size() + 1, false);
  for (std::size_t i = 0; i < column.size(); ++i) {
    raw[i] = static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), column[i]) -
                                      edges.begin());
    used[raw[i]] = true;
  }
  std::vector<std::size_t> dense(used.size(), 0);
  std::size_t next = 0;
  for (std::size_t b = 0; b < used.size(); ++b) {
    if (used[b]) dense[b] = next++;
  }
  for (std::size_t i = 0; i < column.size(); ++i) ids[i] = dense[raw[i]];
  return ids;
}

std::string_view to_string(SelectionMethod m) noexcept {
  return m == SelectionMethod::chi2_topk ? "chi2" : "corr";
}

SelectionMethod selection_method_from_string(std::string_view name) {
  if (name == "chi2" || name == "chi2_topk") return SelectionMethod::chi2_topk;
  if (name == "corr" || name == "corr_threshold") return SelectionMethod::corr_threshold;
  throw Error(ErrorCode::InvalidArgument, "unknown selection method '" + std::string(name) + "'");
}

SelectionReport select_top_k_chi2(const CleanDataset& dataset, std::size_t k, std::size_t bins) {
  const std::size_t d = dataset.feature_count();
  if (k > d) {
    throw Error(ErrorCode::KExceedsFeatureCount,
                "k = " + std::to_string(k) + " exceeds feature count " + std::to_string(d));
  }
  SelectionReport report;
  report.method = SelectionMethod::chi2_topk;
  report.feature_names = dataset.column_names;
  report.k = k;
  report.bins = bins;
  report.scores.reserve(d);
  for (std::size_t c = 0; c < d; ++c) {
    const auto column = dataset.features.column(c);
    const auto ids = bin_continuous(column, bins);
    report.scores.push_back(
        chi_square_statistic(ContingencyTable::from_ids(ids, dataset.labels)).statistic);
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return report.scores[a] > report.scores[b]; });
  report.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  return report;
}

std::vector<double> correlation_with_target(const CleanDataset& dataset) {
  const std::size_t n = dataset.rows();
  std::vector<double> scores(dataset.feature_count(), 0.0);
  if (n == 0) return scores;

  double label_mean = 0.0;
  for (ClassId y : dataset.labels) label_mean += static_cast<double>(y);
  label_mean /= static_cast<double>(n);
  double label_ss = 0.0;
  for (ClassId y : dataset.labels) {
    const double dy = static_cast<double>(y) - label_mean;
    label_ss += dy * dy;
  }
  if (label_ss == 0.0) return scores;

  for (std::size_t c = 0; c < dataset.feature_count(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += dataset.features(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    double cross = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double dx = dataset.features(r, c) - mean;
      ss += dx * dx;
      cross += dx * (static_cast<double>(dataset.labels[r]) - label_mean);
    }
    if (ss == 0.0) continue;
    scores[c] = std::min(1.0, std::abs(cross) / std::sqrt(ss * label_ss));
  }
  return scores;
}

SelectionReport select_by_correlation(const CleanDataset& dataset, double threshold) {
  SelectionReport report;
  report.method = SelectionMethod::corr_threshold;
  report.feature_names = dataset.column_names;
  report.threshold = threshold;
  report.scores = correlation_with_target(dataset);
  for (std::size_t c = 0; c < report.scores.size(); ++c) {
    if (report.scores[c] > threshold) report.selected.push_back(c);
  }
  report.empty_selection = report.selected.empty();
  return report;
}

std::string SelectionReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["method"] = std::string(bayesnid::to_string(method));
  doc["parameters"] = {{"k", k}, {"threshold", threshold}, {"bins", bins}};
  doc["empty_selection"] = empty_selection;
  auto features = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool is_selected = std::find(selected.begin(), selected.end(), i) != selected.end();
    features.push_back({{"index", i},
                        {"name", i < feature_names.size() ? feature_names[i] : std::string()},
                        {"score", scores[i]},
                        {"selected", is_selected}});
  }
  doc["features"] = std::move(features);
  doc["selected"] = selected;
  return doc.dump(2) + "\n";
}

SelectionReport SelectionReport::from_json(std::string_view document) {
  try {
    const auto doc = nlohmann::ordered_json::parse(document);
    SelectionReport report;
    report.method = selection_method_from_string(doc.at("method").get<std::string>());
    const auto& params = doc.at("parameters");
    report.k = params.at("k").get<std::size_t>();
    report.threshold = params.at("threshold").get<double>();
    report.bins = params.at("bins").get<std::size_t>();
    report.empty_selection = doc.at("empty_selection").get<bool>();
    for (const auto& f : doc.at("features")) {
      report.feature_names.push_back(f.at("name").get<std::string>());
      report.scores.push_back(f.at("score").get<double>());
    }
    report.selected = doc.at("selected").get<std::vector<std::size_t>>();
    for (std::size_t i : report.selected) {
      if (i >= report.scores.size()) {
        throw Error(ErrorCode::InvariantViolation, "selected index out of range");
      }
    }
    return report;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
}

}  // namespace bayesnid
