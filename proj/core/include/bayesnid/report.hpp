#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bayesnid/evaluation.hpp"

namespace bayesnid {

enum class ChartKind { bar_train_test, box_per_class, heatmap_confusion };

struct ChartSeries {
  std::string name;
  std::vector<double> values;
};

/// Input to the SVG renderer.
///
/// bar_train_test: one series per bar group member (e.g. "train", "test"),
///   each with one value per category.
/// box_per_class: one series per category; the values are the box sample.
/// heatmap_confusion: one series per matrix row, each with categories.size() values.
struct ChartSpec {
  ChartKind kind = ChartKind::bar_train_test;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> categories;
  std::vector<ChartSeries> series;
  std::filesystem::path output_path;

  /// Throws InvalidSpec on inconsistent lengths or non-finite values.
  void validate() const;
};

/// Fixed layout constants shared by the renderer and its tests.
struct SvgLayout {
  static constexpr double width = 640.0;
  static constexpr double height = 400.0;
  static constexpr double margin_left = 70.0;
  static constexpr double margin_right = 20.0;
  static constexpr double margin_top = 40.0;
  static constexpr double margin_bottom = 60.0;
  static constexpr double plot_height = height - margin_top - margin_bottom;
};

std::string emit_svg(const ChartSpec& spec);

struct EmittedFiles {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// confusion_<variant>.csv, per_class_recall.csv and accuracy_table.csv.
/// Per-class tables are skipped (with a warning) for single-class reports.
EmittedFiles emit_csv(const ComparisonReport& report, const std::filesystem::path& out_dir);

/// fig_train_test.svg, fig_box.svg and fig_confusion_<variant>.svg.
EmittedFiles emit_figures(const ComparisonReport& report, const std::filesystem::path& out_dir);

/// Chart specs for the three figure kinds, used by emit_figures.
ChartSpec train_test_chart(const ComparisonReport& report);
ChartSpec per_class_box_chart(const ComparisonReport& report);
ChartSpec confusion_heatmap_chart(const EvalReport& eval);

/// Writes `content` to `path`, throwing IoFailure on error.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace bayesnid
