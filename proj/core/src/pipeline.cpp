#include "bayesnid/pipeline.hpp"

#include <algorithm>

#include <json.hpp>

#include "bayesnid/digest.hpp"
#include "bayesnid/error.hpp"
#include "bayesnid/model_io.hpp"
#include "bayesnid/report.hpp"

namespace bayesnid {

namespace {

using Json = nlohmann::ordered_json;

template <typename T>
void read_optional(const Json& j, const char* key, T& target) {
  if (const auto it = j.find(key); it != j.end() && !it->is_null()) target = it->template get<T>();
}

Json stats_to_json(const ColumnStats& s) {
  return {{"name", s.name},
          {"mean", s.mean},
          {"std", s.std},
          {"min", s.min},
          {"max", s.max},
          {"missing_count", s.missing_count},
          {"negative_count", s.negative_count},
          {"all_missing", s.all_missing}};
}

ColumnStats stats_from_json(const Json& j) {
  ColumnStats s;
  s.name = j.at("name").get<std::string>();
  s.mean = j.at("mean").get<double>();
  s.std = j.at("std").get<double>();
  s.min = j.at("min").get<double>();
  s.max = j.at("max").get<double>();
  s.missing_count = j.at("missing_count").get<std::size_t>();
  s.negative_count = j.at("negative_count").get<std::size_t>();
  s.all_missing = j.at("all_missing").get<bool>();
  return s;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + dir.string() + "': " + ec.message());
}

}  // namespace

std::string files::dataset(bool train, TransformTag tag) {
  return std::string(train ? "train_" : "test_") + std::string(to_string(tag)) + ".csv";
}

std::string files::model(Variant v) { return "model_" + std::string(to_string(v)) + ".json"; }

std::string RunConfig::to_json() const {
  Json doc;
  doc["input"] = input.string();
  doc["label_column"] = label_column;
  doc["seed"] = split.seed;
  doc["split"] = {{"test_fraction", split.test_fraction}, {"stratified", split.stratified}};
  doc["select"] = {{"method", std::string(bayesnid::to_string(select))},
                   {"k", k},
                   {"corr_threshold", corr_threshold},
                   {"bins", bins}};
  doc["fit"] = {{"alpha", fit.alpha}, {"var_epsilon", fit.var_epsilon}};
  doc["signed_columns"] = signed_columns;
  doc["class_order"] = class_order;
  return doc.dump(2) + "\n";
}

RunConfig RunConfig::from_json(std::string_view document) {
  RunConfig config;
  try {
    const Json doc = Json::parse(document);
    if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "run config is not an object");
    std::string input;
    read_optional(doc, "input", input);
    if (!input.empty()) config.input = input;
    read_optional(doc, "label_column", config.label_column);
    read_optional(doc, "seed", config.split.seed);
    if (const auto it = doc.find("split"); it != doc.end()) {
      read_optional(*it, "test_fraction", config.split.test_fraction);
      read_optional(*it, "stratified", config.split.stratified);
    }
    if (const auto it = doc.find("select"); it != doc.end()) {
      std::string method;
      read_optional(*it, "method", method);
      if (!method.empty()) config.select = selection_method_from_string(method);
      read_optional(*it, "k", config.k);
      read_optional(*it, "corr_threshold", config.corr_threshold);
      read_optional(*it, "bins", config.bins);
    }
    if (const auto it = doc.find("fit"); it != doc.end()) {
      read_optional(*it, "alpha", config.fit.alpha);
      read_optional(*it, "var_epsilon", config.fit.var_epsilon);
    }
    read_optional(doc, "signed_columns", config.signed_columns);
    read_optional(doc, "class_order", config.class_order);
    std::string out_dir;
    read_optional(doc, "out", out_dir);
    if (!out_dir.empty()) config.out_dir = out_dir;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("run config: ") + e.what());
  }
  return config;
}

std::string TransformManifest::to_json() const {
  Json doc;
  doc["version"] = 1;
  doc["label_column"] = label_column;
  doc["class_names"] = class_names;
  doc["feature_columns"] = feature_columns;
  doc["dropped_columns"] = dropped_columns;
  doc["signed_columns"] = signed_columns;
  Json stats = Json::array();
  for (const auto& s : imputation) stats.push_back(stats_to_json(s));
  doc["imputation"] = std::move(stats);
  doc["count_shift"] = count_shift;
  doc["binarize_threshold"] = binarize_threshold;
  doc["split"] = {{"test_fraction", split.test_fraction},
                  {"seed", split.seed},
                  {"stratified", split.stratified}};
  doc["train_rows"] = train_rows;
  doc["test_rows"] = test_rows;
  doc["input_digest"] = input_digest;
  doc["selection"] = selection ? Json::parse(selection->to_json()) : Json(nullptr);
  return doc.dump(2) + "\n";
}

TransformManifest TransformManifest::from_json(std::string_view document) {
  TransformManifest m;
  try {
    const Json doc = Json::parse(document);
    if (doc.at("version").get<int>() != 1) {
      throw Error(ErrorCode::VersionMismatch, "unsupported manifest version");
    }
    m.label_column = doc.at("label_column").get<std::string>();
    m.class_names = doc.at("class_names").get<std::vector<std::string>>();
    m.feature_columns = doc.at("feature_columns").get<std::vector<std::string>>();
    m.dropped_columns = doc.at("dropped_columns").get<std::vector<std::string>>();
    m.signed_columns = doc.at("signed_columns").get<std::vector<std::string>>();
    for (const auto& s : doc.at("imputation")) m.imputation.push_back(stats_from_json(s));
    m.count_shift = doc.at("count_shift").get<std::vector<double>>();
    m.binarize_threshold = doc.at("binarize_threshold").get<std::vector<double>>();
    const auto& split = doc.at("split");
    m.split.test_fraction = split.at("test_fraction").get<double>();
    m.split.seed = split.at("seed").get<std::uint64_t>();
    m.split.stratified = split.at("stratified").get<bool>();
    m.train_rows = doc.at("train_rows").get<std::size_t>();
    m.test_rows = doc.at("test_rows").get<std::size_t>();
    m.input_digest = doc.at("input_digest").get<std::string>();
    if (const auto& sel = doc.at("selection"); !sel.is_null()) {
      m.selection = SelectionReport::from_json(sel.dump());
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("manifest: ") + e.what());
  }
  if (m.count_shift.size() != m.feature_columns.size() ||
      m.binarize_threshold.size() != m.feature_columns.size()) {
    throw Error(ErrorCode::InvariantViolation, "manifest transform vectors differ from column count");
  }
  return m;
}

CleanResult run_clean(const RawTable& table, const RunConfig& config,
                      const std::string& input_digest) {
  const LabelMap labels = config.class_order.empty()
                              ? LabelMap::from_labels(table.labels)
                              : LabelMap::fixed(config.class_order, table.labels);
  const std::vector<ClassId> ids = labels.encode(table.labels);
  const SplitIndices split = split_indices(ids, labels.class_names.size(), config.split);

  const RawTable train_raw = table.subset_rows(split.train);
  const RawTable test_raw = table.subset_rows(split.test);

  // Every statistic below is computed from the training partition only.
  const std::vector<ColumnStats> stats = compute_column_stats(train_raw);
  NonNegativeSchema schema;
  schema.signed_columns.insert(config.signed_columns.begin(), config.signed_columns.end());
  const ImputeResult train_imputed = impute(train_raw, stats, schema);
  const ImputeResult test_imputed = impute(test_raw, stats, schema);

  CleanResult result;
  CleanDataset train = encode_labels(train_imputed.table, labels);
  CleanDataset test = encode_labels(test_imputed.table, labels);
  const CountTransform counts = CountTransform::fit(train);
  const BinarizeTransform bits = BinarizeTransform::fit(train);

  result.data.counts = {counts.apply(train), counts.apply(test)};
  result.data.binary = {bits.apply(train), bits.apply(test)};
  result.data.continuous = {std::move(train), std::move(test)};

  TransformManifest& m = result.manifest;
  m.label_column = table.label_column;
  m.class_names = labels.class_names;
  m.feature_columns = train_imputed.table.column_names;
  m.dropped_columns = train_imputed.dropped_columns;
  m.signed_columns = config.signed_columns;
  m.imputation = stats;
  m.count_shift = counts.shift;
  m.binarize_threshold = bits.threshold;
  m.split = config.split;
  m.train_rows = split.train.size();
  m.test_rows = split.test.size();
  m.input_digest = input_digest;

  result.defect_summary = compute_column_stats(table);
  result.filled_cells = train_imputed.filled_cells + test_imputed.filled_cells;
  result.clamped_cells = train_imputed.clamped_cells + test_imputed.clamped_cells;
  return result;
}

void write_clean_outputs(const CleanResult& result, const std::filesystem::path& dir) {
  ensure_dir(dir);
  const auto& label = result.manifest.label_column;
  const auto write_pair = [&](const VariantData& d, TransformTag tag) {
    write_dataset_csv(d.train, dir / files::dataset(true, tag), label);
    write_dataset_csv(d.test, dir / files::dataset(false, tag), label);
  };
  write_pair(result.data.continuous, TransformTag::continuous);
  write_pair(result.data.counts, TransformTag::counts);
  write_pair(result.data.binary, TransformTag::binary);
  write_text_file(dir / files::manifest, result.manifest.to_json());
}

CleanResult load_clean_outputs(const std::filesystem::path& dir) {
  CleanResult result;
  result.manifest = TransformManifest::from_json(read_text_file(dir / files::manifest));
  const auto& m = result.manifest;
  const auto read_pair = [&](TransformTag tag) {
    VariantData d{read_dataset_csv(dir / files::dataset(true, tag), m.class_names, tag, m.label_column),
                  read_dataset_csv(dir / files::dataset(false, tag), m.class_names, tag, m.label_column)};
    if (d.train.column_names != m.feature_columns || d.test.column_names != m.feature_columns) {
      throw Error(ErrorCode::ManifestMismatch,
                  "columns of " + files::dataset(true, tag) + " differ from the manifest");
    }
    return d;
  };
  result.data.continuous = read_pair(TransformTag::continuous);
  result.data.counts = read_pair(TransformTag::counts);
  result.data.binary = read_pair(TransformTag::binary);
  return result;
}

SelectionReport run_select(const CleanResult& clean, const RunConfig& config) {
  const CleanDataset& train = clean.data.continuous.train;
  if (config.select == SelectionMethod::chi2_topk) {
    return select_top_k_chi2(train, std::min(config.k, train.feature_count()), config.bins);
  }
  return select_by_correlation(train, config.corr_threshold);
}

void apply_selection(CleanResult& clean, const SelectionReport& selection) {
  if (selection.feature_names != clean.data.continuous.train.column_names) {
    throw Error(ErrorCode::ManifestMismatch, "selection was scored on different columns");
  }
  clean.manifest.selection = selection;
  if (selection.selected.empty()) return;

  std::vector<std::size_t> columns = selection.selected;
  std::sort(columns.begin(), columns.end());
  for (VariantData* d : {&clean.data.continuous, &clean.data.counts, &clean.data.binary}) {
    d->train = d->train.subset_columns(columns);
    d->test = d->test.subset_columns(columns);
  }
}

const TrainedModel& TrainedSet::get(Variant v) const {
  switch (v) {
    case Variant::gaussian: return gaussian;
    case Variant::multinomial: return multinomial;
    case Variant::bernoulli: return bernoulli;
  }
  return gaussian;
}

TrainedSet train_all(const CleanResult& clean, const FitConfig& config) {
  return {fit_gaussian(clean.data.continuous.train, config),
          fit_multinomial(clean.data.counts.train, config),
          fit_bernoulli(clean.data.binary.train, config)};
}

void write_report_outputs(ComparisonReport& report, const CleanResult& clean,
                          const RunConfig& config, const std::filesystem::path& dir) {
  ensure_dir(dir);
  report.metadata.seed = config.split.seed;
  report.metadata.input_digest = clean.manifest.input_digest;
  report.metadata.manifest_digest = sha256_hex(clean.manifest.to_json());
  report.metadata.run_config_json = config.to_json();
  write_text_file(dir / files::comparison, report.to_json());
  emit_csv(report, dir);
  emit_figures(report, dir);
}

ComparisonReport evaluate_saved(const std::filesystem::path& dir, const RunConfig& config) {
  CleanResult clean = load_clean_outputs(dir);
  if (clean.manifest.selection) {
    const SelectionReport selection = *clean.manifest.selection;
    apply_selection(clean, selection);
  }

  ComparisonReport report;
  report.train_rows = clean.data.continuous.train.rows();
  report.test_rows = clean.data.continuous.test.rows();
  report.class_names = clean.manifest.class_names;
  report.feature_names = clean.data.continuous.train.column_names;
  const auto paths = {std::pair{Variant::gaussian, &clean.data.continuous},
                      std::pair{Variant::multinomial, &clean.data.counts},
                      std::pair{Variant::bernoulli, &clean.data.binary}};
  for (const auto& [variant, data] : paths) {
    const TrainedModel model = deserialize_model(read_text_file(dir / files::model(variant)));
    if (model.variant != variant || model.class_names != report.class_names) {
      throw Error(ErrorCode::ManifestMismatch, files::model(variant) + " does not match the manifest");
    }
    report.reports.push_back(evaluate_model(model, data->train, data->test));
  }
  report.ranking = rank_by_test_accuracy(report.reports);
  write_report_outputs(report, clean, config, dir);
  return report;
}

ComparisonReport run_compare(const RunConfig& config) {
  const std::string digest = sha256_file(config.input);
  const RawTable table = load_csv(config.input, CsvOptions{config.label_column});

  CleanResult clean = run_clean(table, config, digest);
  write_clean_outputs(clean, config.out_dir);

  const SelectionReport selection = run_select(clean, config);
  apply_selection(clean, selection);
  write_text_file(config.out_dir / files::selection, selection.to_json());
  write_text_file(config.out_dir / files::manifest, clean.manifest.to_json());

  const TrainedSet models = train_all(clean, config.fit);
  for (Variant v : kAllVariants) {
    write_text_file(config.out_dir / files::model(v), serialize_model(models.get(v)));
  }

  ComparisonReport report = compare_variants(clean.data, config.fit);
  write_report_outputs(report, clean, config, config.out_dir);
  return report;
}

}  // namespace bayesnid
