#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bayesnid/csv.hpp"
#include "bayesnid/dataset.hpp"

namespace bayesnid {

struct ColumnStats {
  std::string name;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;
  std::size_t missing_count = 0;
  std::size_t negative_count = 0;
  /// No present value at all; the column is dropped by impute().
  bool all_missing = false;
};

std::vector<ColumnStats> compute_column_stats(const RawTable& table);

/// Which feature columns must be non-negative. Flow features are durations,
/// counts and sizes, so by default every column is; `signed_columns` opts out.
struct NonNegativeSchema {
  std::set<std::string> signed_columns;

  bool is_non_negative(const std::string& column) const {
    return !signed_columns.contains(column);
  }
};

struct ImputeResult {
  RawTable table;
  std::vector<std::string> dropped_columns;
  std::size_t filled_cells = 0;
  std::size_t clamped_cells = 0;
};

/// Fills absent cells with the column mean from `stats` (matched by column
/// name) and clamps negatives in non-negative columns to zero. Columns whose
/// stats are all_missing are dropped.
ImputeResult impute(const RawTable& table, std::span<const ColumnStats> stats,
                    const NonNegativeSchema& schema = {});

/// Class-name to id mapping.
struct LabelMap {
  std::vector<std::string> class_names;

  /// First-appearance order.
  static LabelMap from_labels(std::span<const std::string> labels);
  /// Fixed order; throws UnknownLabel for any label outside it.
  static LabelMap fixed(std::vector<std::string> order, std::span<const std::string> labels);

  ClassId id_of(const std::string& label) const;
  std::vector<ClassId> encode(std::span<const std::string> labels) const;
};

/// The six traffic classes of the DoS flow capture, in encoding order 0..5.
const std::vector<std::string>& default_attack_classes();

/// Requires a complete table (no absent cells).
CleanDataset encode_labels(const RawTable& table, const LabelMap& map);
CleanDataset encode_labels(const RawTable& table);

/// Shift-to-non-negative transform fitted on the training partition.
struct CountTransform {
  std::vector<double> shift;  // per feature, -min(train) when min < 0 else 0

  static CountTransform fit(const CleanDataset& train);
  CleanDataset apply(const CleanDataset& data) const;
};

CleanDataset to_counts(const CleanDataset& continuous);

/// Median-threshold binarization fitted on the training partition.
struct BinarizeTransform {
  std::vector<double> threshold;  // per feature train median

  static BinarizeTransform fit(const CleanDataset& train);
  /// Already-binary datasets pass through unchanged.
  CleanDataset apply(const CleanDataset& data) const;
};

CleanDataset binarize(const CleanDataset& continuous);

/// Median with the mean-of-middle-pair convention for even lengths.
double median(std::vector<double> values);

struct SplitSpec {
  double test_fraction = 0.3;
  std::uint64_t seed = 42;
  bool stratified = true;
};

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Deterministic under seed. Stratified: each class with n_c rows puts
/// round(n_c * test_fraction) rows in test, clamped to [1, n_c - 1].
SplitIndices split_indices(std::span<const ClassId> labels, std::size_t class_count,
                           const SplitSpec& spec);

std::pair<CleanDataset, CleanDataset> stratified_split(const CleanDataset& dataset,
                                                       const SplitSpec& spec);

/// Writes features plus a trailing label column holding class names.
void write_dataset_csv(const CleanDataset& data, const std::filesystem::path& path,
                       const std::string& label_column = "Label");

/// Reads a dataset written by write_dataset_csv with a known class order.
CleanDataset read_dataset_csv(const std::filesystem::path& path,
                              const std::vector<std::string>& class_names, TransformTag tag,
                              const std::string& label_column = "Label");

}  // namespace bayesnid
