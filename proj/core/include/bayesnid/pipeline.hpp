#pragma once

// Staged experiment: clean -> select -> train -> evaluate -> report.
// Each stage has an in-memory entry point and an on-disk form so the CLI
// subcommands can run them independently.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bayesnid/csv.hpp"
#include "bayesnid/evaluation.hpp"
#include "bayesnid/feature_select.hpp"
#include "bayesnid/naive_bayes.hpp"
#include "bayesnid/preprocess.hpp"

namespace bayesnid {

struct RunConfig {
  std::filesystem::path input;
  std::string label_column = "Label";
  SplitSpec split;
  SelectionMethod select = SelectionMethod::corr_threshold;
  std::size_t k = 10;
  double corr_threshold = 0.5;
  std::size_t bins = 10;
  FitConfig fit;
  std::filesystem::path out_dir = "out";
  /// Columns allowed to hold negative values.
  std::vector<std::string> signed_columns;
  /// Fixed class encoding order; empty means first-appearance order.
  std::vector<std::string> class_order;

  /// The output directory is omitted so that runs into different
  /// directories embed identical provenance.
  std::string to_json() const;
  /// Missing keys keep their defaults.
  static RunConfig from_json(std::string_view document);
};

/// Everything needed to replay the test-time transforms bit-exactly.
struct TransformManifest {
  std::string label_column = "Label";
  std::vector<std::string> class_names;
  std::vector<std::string> feature_columns;  // after drops, before selection
  std::vector<std::string> dropped_columns;
  std::vector<ColumnStats> imputation;  // training-partition statistics
  std::vector<std::string> signed_columns;
  std::vector<double> count_shift;
  std::vector<double> binarize_threshold;
  SplitSpec split;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::string input_digest;
  std::optional<SelectionReport> selection;

  std::string to_json() const;
  static TransformManifest from_json(std::string_view document);
};

struct CleanResult {
  TransformManifest manifest;
  ComparisonInputs data;
  /// Whole-table column statistics, reported as the defect summary.
  std::vector<ColumnStats> defect_summary;
  std::size_t filled_cells = 0;
  std::size_t clamped_cells = 0;
};

CleanResult run_clean(const RawTable& table, const RunConfig& config,
                      const std::string& input_digest = {});

/// train_/test_ x continuous/counts/binary CSVs plus manifest.json.
void write_clean_outputs(const CleanResult& result, const std::filesystem::path& dir);
CleanResult load_clean_outputs(const std::filesystem::path& dir);

/// Scores features on the continuous training partition.
SelectionReport run_select(const CleanResult& clean, const RunConfig& config);

/// Restricts all six datasets to the selected columns and records the
/// selection in the manifest. An empty selection keeps every feature.
void apply_selection(CleanResult& clean, const SelectionReport& selection);

struct TrainedSet {
  TrainedModel gaussian;
  TrainedModel multinomial;
  TrainedModel bernoulli;

  const TrainedModel& get(Variant v) const;
};

TrainedSet train_all(const CleanResult& clean, const FitConfig& config);

/// Evaluates saved models against the clean outputs in `dir` (selection from
/// the manifest applied) and writes the report files there.
ComparisonReport evaluate_saved(const std::filesystem::path& dir, const RunConfig& config);

/// comparison.json, CSV tables and SVG figures.
void write_report_outputs(ComparisonReport& report, const CleanResult& clean,
                          const RunConfig& config, const std::filesystem::path& dir);

/// Full pipeline from config.input; writes every artifact into config.out_dir.
ComparisonReport run_compare(const RunConfig& config);

/// Names of the per-stage files inside an output directory.
namespace files {
inline constexpr std::string_view manifest = "manifest.json";
inline constexpr std::string_view selection = "selection.json";
inline constexpr std::string_view comparison = "comparison.json";
std::string dataset(bool train, TransformTag tag);
std::string model(Variant v);
}  // namespace files

}  // namespace bayesnid
