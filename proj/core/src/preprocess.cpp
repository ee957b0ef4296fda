#include "bayesnid/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>

#include "bayesnid/error.hpp"

namespace bayesnid {

namespace {

// Unbiased draw in [0, bound) by rejection; independent of the standard
// library's distribution implementations so splits match across toolchains.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % bound;
  std::uint64_t x = 0;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

void shuffle(std::vector<std::size_t>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(draw_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace

std::vector<ColumnStats> compute_column_stats(const RawTable& table) {
  std::vector<ColumnStats> out(table.column_count());
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    ColumnStats& s = out[c];
    s.name = table.column_names[c];
    double sum = 0.0;
    std::size_t present = 0;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < table.rows(); ++r) {
      const auto& v = table.cell(r, c);
      if (!v) {
        ++s.missing_count;
        continue;
      }
      ++present;
      sum += *v;
      s.min = std::min(s.min, *v);
      s.max = std::max(s.max, *v);
      if (*v < 0.0) ++s.negative_count;
    }
    if (present == 0) {
      s.all_missing = true;
      s.min = s.max = 0.0;
      continue;
    }
    s.mean = sum / static_cast<double>(present);
    double sq = 0.0;
    for (std::size_t r = 0; r < table.rows(); ++r) {
      if (const auto& v = table.cell(r, c)) sq += (*v - s.mean) * (*v - s.mean);
    }
    s.std = std::sqrt(sq / static_cast<double>(present));
  }
  return out;
}

ImputeResult impute(const RawTable& table, std::span<const ColumnStats> stats,
                    const NonNegativeSchema& schema) {
  std::map<std::string, const ColumnStats*> by_name;
  for (const auto& s : stats) by_name[s.name] = &s;

  ImputeResult result;
  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    const auto it = by_name.find(table.column_names[c]);
    if (it == by_name.end()) {
      throw Error(ErrorCode::ManifestMismatch,
                  "no statistics for column '" + table.column_names[c] + "'");
    }
    if (it->second->all_missing) {
      result.dropped_columns.push_back(table.column_names[c]);
    } else {
      kept.push_back(c);
    }
  }

  RawTable& out = result.table;
  out.label_column = table.label_column;
  out.labels = table.labels;
  for (std::size_t c : kept) out.column_names.push_back(table.column_names[c]);
  out.cells.reserve(table.rows() * kept.size());

  std::vector<const ColumnStats*> column_stats;
  std::vector<bool> non_negative;
  for (std::size_t c : kept) {
    column_stats.push_back(by_name.at(table.column_names[c]));
    non_negative.push_back(schema.is_non_negative(table.column_names[c]));
  }

  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t j = 0; j < kept.size(); ++j) {
      std::optional<double> v = table.cell(r, kept[j]);
      if (!v) {
        v = column_stats[j]->mean;
        ++result.filled_cells;
      }
      if (non_negative[j] && *v < 0.0) {
        v = 0.0;
        ++result.clamped_cells;
      }
      out.cells.push_back(v);
    }
  }
  return result;
}

LabelMap LabelMap::from_labels(std::span<const std::string> labels) {
  LabelMap map;
  for (const auto& label : labels) {
    if (std::find(map.class_names.begin(), map.class_names.end(), label) == map.class_names.end()) {
      map.class_names.push_back(label);
    }
  }
  return map;
}

LabelMap LabelMap::fixed(std::vector<std::string> order, std::span<const std::string> labels) {
  LabelMap map;
  map.class_names = std::move(order);
  for (const auto& label : labels) (void)map.id_of(label);
  return map;
}

ClassId LabelMap::id_of(const std::string& label) const {
  const auto it = std::find(class_names.begin(), class_names.end(), label);
  if (it == class_names.end()) {
    throw Error(ErrorCode::UnknownLabel, "label '" + label + "' is not in the class ordering");
  }
  return static_cast<ClassId>(it - class_names.begin());
}

std::vector<ClassId> LabelMap::encode(std::span<const std::string> labels) const {
  std::vector<ClassId> ids;
  ids.reserve(labels.size());
  for (const auto& label : labels) ids.push_back(id_of(label));
  return ids;
}

const std::vector<std::string>& default_attack_classes() {
  static const std::vector<std::string> kClasses = {
      "BENIGN", "DoS slowloris", "DoS Slowhttptest", "DoS Hulk", "DoS GoldenEye", "Heartbleed"};
  return kClasses;
}

CleanDataset encode_labels(const RawTable& table, const LabelMap& map) {
  CleanDataset out;
  out.class_names = map.class_names;
  out.column_names = table.column_names;
  out.transform_tag = TransformTag::continuous;
  out.labels = map.encode(table.labels);
  out.features = Matrix(table.rows(), table.column_count());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.column_count(); ++c) {
      const auto& v = table.cell(r, c);
      if (!v) {
        throw Error(ErrorCode::NonFinite, "absent cell at row " + std::to_string(r + 1) +
                                              ", column '" + table.column_names[c] +
                                              "'; impute before encoding");
      }
      out.features(r, c) = *v;
    }
  }
  return out;
}

CleanDataset encode_labels(const RawTable& table) {
  return encode_labels(table, LabelMap::from_labels(table.labels));
}

CountTransform CountTransform::fit(const CleanDataset& train) {
  CountTransform t;
  t.shift.assign(train.feature_count(), 0.0);
  for (std::size_t c = 0; c < train.feature_count(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < train.rows(); ++r) lo = std::min(lo, train.features(r, c));
    if (train.rows() > 0 && lo < 0.0) t.shift[c] = -lo;
  }
  return t;
}

CleanDataset CountTransform::apply(const CleanDataset& data) const {
  if (data.feature_count() != shift.size()) {
    throw Error(ErrorCode::DimensionMismatch, "count transform fitted on " +
                                                  std::to_string(shift.size()) + " features");
  }
  CleanDataset out = data;
  out.transform_tag = TransformTag::counts;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = std::max(0.0, row[c] + shift[c]);
  }
  return out;
}

CleanDataset to_counts(const CleanDataset& continuous) {
  return CountTransform::fit(continuous).apply(continuous);
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of an empty sequence");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2.0;
}

BinarizeTransform BinarizeTransform::fit(const CleanDataset& train) {
  BinarizeTransform t;
  t.threshold.reserve(train.feature_count());
  for (std::size_t c = 0; c < train.feature_count(); ++c) {
    t.threshold.push_back(train.rows() == 0 ? 0.0 : median(train.features.column(c)));
  }
  return t;
}

CleanDataset BinarizeTransform::apply(const CleanDataset& data) const {
  if (data.transform_tag == TransformTag::binary) return data;
  if (data.feature_count() != threshold.size()) {
    throw Error(ErrorCode::DimensionMismatch, "binarize transform fitted on " +
                                                  std::to_string(threshold.size()) + " features");
  }
  CleanDataset out = data;
  out.transform_tag = TransformTag::binary;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = row[c] > threshold[c] ? 1.0 : 0.0;
  }
  return out;
}

CleanDataset binarize(const CleanDataset& continuous) {
  return BinarizeTransform::fit(continuous).apply(continuous);
}

SplitIndices split_indices(std::span<const ClassId> labels, std::size_t class_count,
                           const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "test_fraction must lie in (0, 1)");
  }
  std::mt19937_64 rng(spec.seed);
  SplitIndices out;

  const auto take = [&](std::vector<std::size_t> members) {
    const auto n = static_cast<double>(members.size());
    auto n_test = static_cast<std::size_t>(std::llround(n * spec.test_fraction));
    n_test = std::clamp<std::size_t>(n_test, 1, members.size() - 1);
    shuffle(members, rng);
    out.test.insert(out.test.end(), members.begin(),
                    members.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test),
                     members.end());
  };

  if (spec.stratified) {
    std::vector<std::vector<std::size_t>> by_class(class_count);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] >= class_count) {
        throw Error(ErrorCode::IdOutOfRange, "label id " + std::to_string(labels[i]));
      }
      by_class[labels[i]].push_back(i);
    }
    for (std::size_t c = 0; c < class_count; ++c) {
      if (by_class[c].empty()) continue;
      if (by_class[c].size() < 2) {
        throw Error(ErrorCode::ClassTooSmall,
                    "class " + std::to_string(c) + " has a single row; cannot stratify");
      }
      take(std::move(by_class[c]));
    }
  } else {
    if (labels.size() < 2) throw Error(ErrorCode::ClassTooSmall, "need at least two rows to split");
    std::vector<std::size_t> all(labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    take(std::move(all));
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<CleanDataset, CleanDataset> stratified_split(const CleanDataset& dataset,
                                                       const SplitSpec& spec) {
  const SplitIndices idx = split_indices(dataset.labels, dataset.class_count(), spec);
  return {dataset.subset_rows(idx.train), dataset.subset_rows(idx.test)};
}

void write_dataset_csv(const CleanDataset& data, const std::filesystem::path& path,
                       const std::string& label_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + path.string() + "'");
  for (const auto& name : data.column_names) out << csv_escape(name) << ',';
  out << csv_escape(label_column) << '\n';
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (double v : data.features.row(r)) out << format_double(v) << ',';
    out << csv_escape(data.class_names[data.labels[r]]) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for '" + path.string() + "'");
}

CleanDataset read_dataset_csv(const std::filesystem::path& path,
                              const std::vector<std::string>& class_names, TransformTag tag,
                              const std::string& label_column) {
  const RawTable table = load_csv(path, CsvOptions{label_column});
  CleanDataset data = encode_labels(table, LabelMap::fixed(class_names, table.labels));
  data.transform_tag = tag;
  data.validate();
  return data;
}

}  // namespace bayesnid
