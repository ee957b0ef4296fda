#include "bayesnid/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "bayesnid/error.hpp"

namespace bayesnid {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Reads one logical record, joining physical lines while a quote is open.
bool read_record(std::istream& in, std::string& record) {
  record.clear();
  std::string line;
  bool open_quote = false;
  bool any = false;
  while (std::getline(in, line)) {
    any = true;
    if (!record.empty() || open_quote) record += '\n';
    record += line;
    for (char ch : line) {
      if (ch == '"') open_quote = !open_quote;
    }
    if (!open_quote) break;
  }
  if (!record.empty() && record.back() == '\r') record.pop_back();
  return any;
}

std::optional<double> parse_cell(std::string_view token, std::size_t row, std::size_t col,
                                 const std::string& column_name) {
  token = trim(token);
  if (is_absent_token(token)) return std::nullopt;
  std::string_view digits = token;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
    throw Error(ErrorCode::UnparseableNumeric,
                "cannot parse '" + std::string(token) + "' at row " + std::to_string(row) +
                    ", column " + std::to_string(col) + " (" + column_name + ")");
  }
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

RawTable RawTable::subset_rows(std::span<const std::size_t> indices) const {
  RawTable out;
  out.column_names = column_names;
  out.label_column = label_column;
  out.cells.reserve(indices.size() * column_count());
  out.labels.reserve(indices.size());
  for (std::size_t r : indices) {
    for (std::size_t c = 0; c < column_count(); ++c) out.cells.push_back(cell(r, c));
    out.labels.push_back(labels[r]);
  }
  return out;
}

std::size_t RawTable::missing_cells() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const auto& v) { return !v.has_value(); }));
}

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool was_quoted = false;
  const auto finish = [&] {
    fields.push_back(was_quoted ? field : std::string(trim(field)));
    field.clear();
    was_quoted = false;
  };
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
      was_quoted = true;
      field.clear();
    } else if (ch == ',') {
      finish();
    } else if (!was_quoted) {
      field += ch;
    }
  }
  finish();
  return fields;
}

bool is_absent_token(std::string_view token) noexcept {
  static constexpr std::array<std::string_view, 10> kAbsent = {
      "", "NaN", "nan", "NAN", "Infinity", "-Infinity", "+Infinity", "inf", "-inf", "null"};
  return std::find(kAbsent.begin(), kAbsent.end(), token) != kAbsent.end();
}

RawTable read_csv(std::istream& in, const CsvOptions& options) {
  std::string record;
  if (!read_record(in, record)) {
    throw Error(ErrorCode::MissingLabelColumn, "input has no header row");
  }
  if (record.starts_with("\xEF\xBB\xBF")) record.erase(0, 3);
  const std::vector<std::string> header = split_csv_record(record);

  const auto label_it = std::find(header.begin(), header.end(), options.label_column);
  if (label_it == header.end()) {
    throw Error(ErrorCode::MissingLabelColumn,
                "header has no label column '" + options.label_column + "'");
  }
  const auto label_index = static_cast<std::size_t>(label_it - header.begin());

  RawTable table;
  table.label_column = options.label_column;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_index) table.column_names.push_back(header[c]);
  }

  std::size_t row = 0;
  while (read_record(in, record)) {
    if (trim(record).empty()) continue;
    const std::vector<std::string> fields = split_csv_record(record);
    ++row;
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::RaggedRow, "row " + std::to_string(row) + " has " +
                                            std::to_string(fields.size()) + " fields, header has " +
                                            std::to_string(header.size()));
    }
    std::size_t feature = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_index) {
        table.labels.push_back(fields[c]);
      } else {
        table.cells.push_back(parse_cell(fields[c], row, c + 1, table.column_names[feature]));
        ++feature;
      }
    }
  }
  return table;
}

RawTable load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  return read_csv(in, options);
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace bayesnid
