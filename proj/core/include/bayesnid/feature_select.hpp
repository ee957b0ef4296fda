#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bayesnid/dataset.hpp"

namespace bayesnid {

/// Feature-bin x class cross tabulation.
struct ContingencyTable {
  std::vector<std::vector<double>> observed;  // rows = bins, cols = classes

  static ContingencyTable from_ids(std::span<const std::size_t> row_ids,
                                   std::span<const ClassId> col_ids);

  std::size_t row_count() const noexcept { return observed.size(); }
  std::size_t col_count() const noexcept { return observed.empty() ? 0 : observed.front().size(); }
  std::vector<double> row_totals() const;
  std::vector<double> col_totals() const;
  double grand_total() const;
  ContingencyTable transposed() const;
};

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  /// Fewer than two non-empty rows or columns; statistic forced to 0.
  bool degenerate = false;
};

/// Pearson's independence statistic sum (O - E)^2 / E, empty rows and
/// columns dropped first.
ChiSquareResult chi_square_statistic(const ContingencyTable& table);

/// Quantile binning into at most `bins` non-empty, densely numbered bins.
/// Interior cut points are linear-interpolated quantiles; duplicates merge.
std::vector<std::size_t> bin_continuous(std::span<const double> column, std::size_t bins);

enum class SelectionMethod { chi2_topk, corr_threshold };

std::string_view to_string(SelectionMethod m) noexcept;
SelectionMethod selection_method_from_string(std::string_view name);

struct SelectionReport {
  SelectionMethod method = SelectionMethod::corr_threshold;
  std::vector<std::string> feature_names;
  std::vector<double> scores;
  std::vector<std::size_t> selected;
  std::size_t k = 0;
  double threshold = 0.0;
  std::size_t bins = 0;
  /// Nothing passed the correlation threshold.
  bool empty_selection = false;

  std::string to_json() const;
  static SelectionReport from_json(std::string_view document);
};

/// Scores every feature; keeps the k best, ties to the lower index.
SelectionReport select_top_k_chi2(const CleanDataset& dataset, std::size_t k,
                                  std::size_t bins = 10);

/// |Pearson r| of each feature against the numeric class id; 0 for constant columns.
std::vector<double> correlation_with_target(const CleanDataset& dataset);

/// Keeps features with score strictly greater than `threshold`, in index order.
SelectionReport select_by_correlation(const CleanDataset& dataset, double threshold = 0.5);

}  // namespace bayesnid
