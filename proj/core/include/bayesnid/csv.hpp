#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bayesnid {

/// Parsed flow-feature table. Feature cells are optional reals (absent for
/// NaN / Infinity / empty tokens); the label column is kept as text.
struct RawTable {
  std::vector<std::string> column_names;  // feature columns, label excluded
  std::string label_column = "Label";
  std::vector<std::optional<double>> cells;  // row-major, rows() x column_count()
  std::vector<std::string> labels;

  std::size_t rows() const noexcept { return labels.size(); }
  std::size_t column_count() const noexcept { return column_names.size(); }

  std::optional<double>& cell(std::size_t r, std::size_t c) { return cells[r * column_count() + c]; }
  const std::optional<double>& cell(std::size_t r, std::size_t c) const {
    return cells[r * column_count() + c];
  }

  RawTable subset_rows(std::span<const std::size_t> indices) const;
  std::size_t missing_cells() const;
};

struct CsvOptions {
  std::string label_column = "Label";
};

/// Splits one CSV record into fields (RFC 4180 quoting). Surrounding
/// whitespace of unquoted fields is trimmed.
std::vector<std::string> split_csv_record(std::string_view line);

/// True for the tokens that stand for an absent value.
bool is_absent_token(std::string_view token) noexcept;

RawTable read_csv(std::istream& in, const CsvOptions& options = {});
RawTable load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Quotes a field if it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

}  // namespace bayesnid
