#include "bayesnid/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bayesnid/csv.hpp"
#include "bayesnid/error.hpp"

namespace bayesnid {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Linear-interpolated quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

class SvgWriter {
public:
  explicit SvgWriter(const ChartSpec& spec) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(SvgLayout::width)
         << "\" height=\"" << num(SvgLayout::height) << "\" viewBox=\"0 0 "
         << num(SvgLayout::width) << ' ' << num(SvgLayout::height) << "\">\n"
         << "<rect x=\"0\" y=\"0\" width=\"" << num(SvgLayout::width) << "\" height=\""
         << num(SvgLayout::height) << "\" fill=\"#ffffff\"/>\n";
    text(SvgLayout::width / 2.0, 24.0, spec.title, "middle", 16, "title");
  }

  void text(double x, double y, std::string_view content, std::string_view anchor = "middle",
            int size = 12, std::string_view cls = "label", double rotate = 0.0) {
    out_ << "<text class=\"" << cls << "\" x=\"" << num(x) << "\" y=\"" << num(y)
         << "\" font-family=\"sans-serif\" font-size=\"" << size << "\" text-anchor=\"" << anchor
         << '"';
    if (rotate != 0.0) out_ << " transform=\"rotate(" << num(rotate) << ' ' << num(x) << ' ' << num(y) << ")\"";
    out_ << '>' << xml_escape(content) << "</text>\n";
  }

  void line(double x1, double y1, double x2, double y2, std::string_view stroke = "#000000",
            std::string_view cls = "axis") {
    out_ << "<line class=\"" << cls << "\" x1=\"" << num(x1) << "\" y1=\"" << num(y1)
         << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke
         << "\" stroke-width=\"1\"/>\n";
  }

  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view cls,
            std::string_view extra = {}) {
    out_ << "<rect class=\"" << cls << "\" x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
         << num(w) << "\" height=\"" << num(h) << "\" fill=\"" << fill << '"';
    if (!extra.empty()) out_ << ' ' << extra;
    out_ << "/>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

private:
  std::ostringstream out_;
};

constexpr double kPlotLeft = SvgLayout::margin_left;
constexpr double kPlotRight = SvgLayout::width - SvgLayout::margin_right;
constexpr double kPlotTop = SvgLayout::margin_top;
constexpr double kPlotBottom = SvgLayout::height - SvgLayout::margin_bottom;
constexpr double kPlotWidth = kPlotRight - kPlotLeft;

constexpr const char* kPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3",
                                    "#937860"};

void value_axis(SvgWriter& svg, const ChartSpec& spec, double y_max) {
  svg.line(kPlotLeft, kPlotTop, kPlotLeft, kPlotBottom);
  svg.line(kPlotLeft, kPlotBottom, kPlotRight, kPlotBottom);
  for (int i = 0; i <= 4; ++i) {
    const double v = y_max * i / 4.0;
    const double y = kPlotBottom - SvgLayout::plot_height * i / 4.0;
    svg.line(kPlotLeft - 4.0, y, kPlotLeft, y, "#000000", "tick");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    svg.text(kPlotLeft - 8.0, y + 4.0, buf, "end", 10, "tick-label");
  }
  svg.text(SvgLayout::width / 2.0, SvgLayout::height - 12.0, spec.x_label, "middle", 12, "x-label");
  svg.text(18.0, (kPlotTop + kPlotBottom) / 2.0, spec.y_label, "middle", 12, "y-label", -90.0);
}

std::string render_bars(const ChartSpec& spec) {
  SvgWriter svg(spec);
  double y_max = 1.0;
  for (const auto& s : spec.series) {
    for (double v : s.values) y_max = std::max(y_max, v);
  }
  value_axis(svg, spec, y_max);

  const double group = kPlotWidth / static_cast<double>(spec.categories.size());
  const double bar = group * 0.8 / static_cast<double>(spec.series.size());
  for (std::size_t c = 0; c < spec.categories.size(); ++c) {
    const double group_left = kPlotLeft + group * static_cast<double>(c) + group * 0.1;
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
      const double v = spec.series[s].values[c];
      const double h = v / y_max * SvgLayout::plot_height;
      const std::string extra = "data-series=\"" + xml_escape(spec.series[s].name) +
                                "\" data-category=\"" + xml_escape(spec.categories[c]) +
                                "\" data-value=\"" + format_double(v) + '"';
      svg.rect(group_left + bar * static_cast<double>(s), kPlotBottom - h, bar, h,
               kPalette[s % std::size(kPalette)], "bar", extra);
    }
    svg.text(kPlotLeft + group * (static_cast<double>(c) + 0.5), kPlotBottom + 16.0,
             spec.categories[c], "middle", 11, "category");
  }
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const double x = kPlotRight - 110.0;
    const double y = kPlotTop + 4.0 + 16.0 * static_cast<double>(s);
    svg.rect(x, y, 10.0, 10.0, kPalette[s % std::size(kPalette)], "legend-swatch");
    svg.text(x + 14.0, y + 9.0, spec.series[s].name, "start", 11, "legend");
  }
  return svg.finish();
}

std::string render_boxes(const ChartSpec& spec) {
  SvgWriter svg(spec);
  double y_max = 1.0;
  for (const auto& s : spec.series) {
    for (double v : s.values) y_max = std::max(y_max, v);
  }
  value_axis(svg, spec, y_max);
  const auto to_y = [&](double v) { return kPlotBottom - v / y_max * SvgLayout::plot_height; };

  const double group = kPlotWidth / static_cast<double>(spec.categories.size());
  for (std::size_t c = 0; c < spec.categories.size(); ++c) {
    std::vector<double> sorted = spec.series[c].values;
    std::sort(sorted.begin(), sorted.end());
    const double q1 = quantile(sorted, 0.25);
    const double q2 = quantile(sorted, 0.5);
    const double q3 = quantile(sorted, 0.75);
    const double centre = kPlotLeft + group * (static_cast<double>(c) + 0.5);
    const double half = group * 0.25;
    svg.line(centre, to_y(sorted.front()), centre, to_y(q1), "#333333", "whisker");
    svg.line(centre, to_y(q3), centre, to_y(sorted.back()), "#333333", "whisker");
    svg.line(centre - half / 2.0, to_y(sorted.front()), centre + half / 2.0, to_y(sorted.front()),
             "#333333", "whisker");
    svg.line(centre - half / 2.0, to_y(sorted.back()), centre + half / 2.0, to_y(sorted.back()),
             "#333333", "whisker");
    const std::string extra = "data-category=\"" + xml_escape(spec.categories[c]) +
                              "\" data-q1=\"" + format_double(q1) + "\" data-median=\"" +
                              format_double(q2) + "\" data-q3=\"" + format_double(q3) + '"';
    svg.rect(centre - half, to_y(q3), 2.0 * half, to_y(q1) - to_y(q3),
             kPalette[c % std::size(kPalette)], "box", extra);
    svg.line(centre - half, to_y(q2), centre + half, to_y(q2), "#000000", "median");
    svg.text(centre, kPlotBottom + 16.0, spec.categories[c], "middle", 11, "category");
  }
  return svg.finish();
}

std::string render_heatmap(const ChartSpec& spec) {
  SvgWriter svg(spec);
  const std::size_t k = spec.categories.size();
  const double side = std::min(kPlotWidth, SvgLayout::plot_height);
  const double cell = side / static_cast<double>(k);
  const double left = kPlotLeft + (kPlotWidth - side) / 2.0;

  double peak = 0.0;
  for (const auto& s : spec.series) {
    for (double v : s.values) peak = std::max(peak, v);
  }
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      const double v = spec.series[r].values[c];
      const double t = peak > 0.0 ? v / peak : 0.0;
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02x%02x", static_cast<int>(255 - t * 206),
                    static_cast<int>(255 - t * 141), static_cast<int>(255 - t * 79));
      const std::string extra = "data-true=\"" + xml_escape(spec.categories[r]) +
                                "\" data-predicted=\"" + xml_escape(spec.categories[c]) +
                                "\" data-value=\"" + format_double(v) + '"';
      const double x = left + cell * static_cast<double>(c);
      const double y = kPlotTop + cell * static_cast<double>(r);
      svg.rect(x, y, cell, cell, fill, "cell", extra);
      svg.text(x + cell / 2.0, y + cell / 2.0 + 4.0, format_double(v), "middle", 10, "cell-value");
    }
    svg.text(left - 4.0, kPlotTop + cell * (static_cast<double>(r) + 0.5) + 4.0, spec.categories[r],
             "end", 9, "row-label");
  }
  for (std::size_t c = 0; c < k; ++c) {
    svg.text(left + cell * (static_cast<double>(c) + 0.5), kPlotTop + side + 14.0,
             spec.categories[c], "middle", 9, "col-label");
  }
  svg.text(SvgLayout::width / 2.0, SvgLayout::height - 12.0, spec.x_label, "middle", 12, "x-label");
  svg.text(18.0, (kPlotTop + kPlotBottom) / 2.0, spec.y_label, "middle", 12, "y-label", -90.0);
  return svg.finish();
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
  return out;
}

}  // namespace

void ChartSpec::validate() const {
  const auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); };
  if (categories.empty()) bad("chart has no categories");
  if (series.empty()) bad("chart has no series");
  for (const auto& s : series) {
    for (double v : s.values) {
      if (!std::isfinite(v)) bad("series '" + s.name + "' holds a non-finite value");
    }
  }
  switch (kind) {
    case ChartKind::bar_train_test:
      for (const auto& s : series) {
        if (s.values.size() != categories.size()) {
          bad("series '" + s.name + "' length differs from category count");
        }
        for (double v : s.values) {
          if (v < 0.0) bad("bar values must be non-negative");
        }
      }
      break;
    case ChartKind::box_per_class:
      if (series.size() != categories.size()) bad("box chart needs one series per category");
      for (const auto& s : series) {
        if (s.values.empty()) bad("box series '" + s.name + "' is empty");
        for (double v : s.values) {
          if (v < 0.0) bad("box values must be non-negative");
        }
      }
      break;
    case ChartKind::heatmap_confusion:
      if (series.size() != categories.size()) bad("heatmap must be square");
      for (const auto& s : series) {
        if (s.values.size() != categories.size()) bad("heatmap must be square");
        for (double v : s.values) {
          if (v < 0.0) bad("heatmap counts must be non-negative");
        }
      }
      break;
  }
}

std::string emit_svg(const ChartSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ChartKind::bar_train_test: return render_bars(spec);
    case ChartKind::box_per_class: return render_boxes(spec);
    case ChartKind::heatmap_confusion: return render_heatmap(spec);
  }
  throw Error(ErrorCode::InvalidSpec, "unknown chart kind");
}

ChartSpec train_test_chart(const ComparisonReport& report) {
  ChartSpec spec;
  spec.kind = ChartKind::bar_train_test;
  spec.title = "Train and test accuracy per naive Bayes variant";
  spec.x_label = "Variant";
  spec.y_label = "Accuracy";
  ChartSeries train{"train", {}};
  ChartSeries test{"test", {}};
  for (const auto& r : report.reports) {
    spec.categories.emplace_back(to_string(r.variant));
    train.values.push_back(r.train_accuracy);
    test.values.push_back(r.test_accuracy);
  }
  spec.series = {std::move(train), std::move(test)};
  spec.output_path = "fig_train_test.svg";
  return spec;
}

ChartSpec per_class_box_chart(const ComparisonReport& report) {
  ChartSpec spec;
  spec.kind = ChartKind::box_per_class;
  spec.title = "Per-class test recall per naive Bayes variant";
  spec.x_label = "Variant";
  spec.y_label = "Recall";
  for (const auto& r : report.reports) {
    spec.categories.emplace_back(to_string(r.variant));
    spec.series.push_back({std::string(to_string(r.variant)), r.recall});
  }
  spec.output_path = "fig_box.svg";
  return spec;
}

ChartSpec confusion_heatmap_chart(const EvalReport& eval) {
  ChartSpec spec;
  spec.kind = ChartKind::heatmap_confusion;
  spec.title = "Test confusion matrix: " + std::string(to_string(eval.variant));
  spec.x_label = "Predicted class";
  spec.y_label = "True class";
  spec.categories = eval.confusion.class_names;
  for (std::size_t r = 0; r < eval.confusion.counts.size(); ++r) {
    ChartSeries row{r < spec.categories.size() ? spec.categories[r] : std::to_string(r), {}};
    for (std::size_t v : eval.confusion.counts[r]) row.values.push_back(static_cast<double>(v));
    spec.series.push_back(std::move(row));
  }
  spec.output_path = "fig_confusion_" + std::string(to_string(eval.variant)) + ".svg";
  return spec;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

EmittedFiles emit_csv(const ComparisonReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + out_dir.string() + "'");

  EmittedFiles emitted;
  std::string table = csv_line({"variant", "train_accuracy", "test_accuracy", "overfit_gap", "rank"});
  for (const auto& r : report.reports) {
    const auto rank_it = std::find(report.ranking.begin(), report.ranking.end(), r.variant);
    const auto rank = static_cast<std::size_t>(rank_it - report.ranking.begin()) + 1;
    table += csv_line({std::string(to_string(r.variant)), format_double(r.train_accuracy),
                       format_double(r.test_accuracy), format_double(r.overfit_gap()),
                       std::to_string(rank)});
  }
  write_text_file(out_dir / "accuracy_table.csv", table);
  emitted.files.push_back(out_dir / "accuracy_table.csv");

  if (report.class_names.size() < 2) {
    emitted.warnings.emplace_back("single-class report: per-class tables skipped");
    return emitted;
  }

  for (const auto& r : report.reports) {
    std::vector<std::string> header{"true\\predicted"};
    header.insert(header.end(), report.class_names.begin(), report.class_names.end());
    std::string text = csv_line(header);
    for (std::size_t t = 0; t < r.confusion.counts.size(); ++t) {
      std::vector<std::string> row{report.class_names[t]};
      for (std::size_t v : r.confusion.counts[t]) row.push_back(std::to_string(v));
      text += csv_line(row);
    }
    const auto path = out_dir / ("confusion_" + std::string(to_string(r.variant)) + ".csv");
    write_text_file(path, text);
    emitted.files.push_back(path);
  }

  std::string recall = csv_line({"variant", "class", "precision", "recall"});
  for (const auto& r : report.reports) {
    for (std::size_t c = 0; c < report.class_names.size(); ++c) {
      recall += csv_line({std::string(to_string(r.variant)), report.class_names[c],
                          format_double(r.precision[c]), format_double(r.recall[c])});
    }
  }
  write_text_file(out_dir / "per_class_recall.csv", recall);
  emitted.files.push_back(out_dir / "per_class_recall.csv");
  return emitted;
}

EmittedFiles emit_figures(const ComparisonReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + out_dir.string() + "'");

  EmittedFiles emitted;
  const auto write = [&](const ChartSpec& spec) {
    const auto path = out_dir / spec.output_path;
    write_text_file(path, emit_svg(spec));
    emitted.files.push_back(path);
  };
  write(train_test_chart(report));
  if (report.class_names.size() < 2) {
    emitted.warnings.emplace_back("single-class report: per-class figures skipped");
    return emitted;
  }
  write(per_class_box_chart(report));
  for (const auto& r : report.reports) write(confusion_heatmap_chart(r));
  return emitted;
}

}  // namespace bayesnid
