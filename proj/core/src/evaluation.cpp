#include "bayesnid/evaluation.hpp"

#include <algorithm>

#include <json.hpp>

#include "bayesnid/error.hpp"

namespace bayesnid {

std::size_t ConfusionMatrix::total() const {
  std::size_t sum = 0;
  for (const auto& row : counts) {
    for (std::size_t v : row) sum += v;
  }
  return sum;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) sum += counts[i][i];
  return sum;
}

ConfusionMatrix confusion_matrix(std::span<const ClassId> truth, std::span<const ClassId> predicted,
                                 std::size_t class_count) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(truth.size()) + " true labels vs " +
                                               std::to_string(predicted.size()) + " predictions");
  }
  ConfusionMatrix cm;
  cm.counts.assign(class_count, std::vector<std::size_t>(class_count, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= class_count || predicted[i] >= class_count) {
      throw Error(ErrorCode::IdOutOfRange, "class id outside [0, " + std::to_string(class_count) +
                                               ") at position " + std::to_string(i));
    }
    ++cm.counts[truth[i]][predicted[i]];
  }
  return cm;
}

double accuracy(const ConfusionMatrix& confusion) {
  const std::size_t total = confusion.total();
  if (total == 0) throw Error(ErrorCode::EmptyEvaluation, "confusion matrix holds no rows");
  return static_cast<double>(confusion.trace()) / static_cast<double>(total);
}

std::vector<double> per_class_precision(const ConfusionMatrix& confusion) {
  const std::size_t k = confusion.class_count();
  std::vector<double> out(k, 0.0);
  for (std::size_t p = 0; p < k; ++p) {
    std::size_t column = 0;
    for (std::size_t t = 0; t < k; ++t) column += confusion.counts[t][p];
    if (column > 0) out[p] = static_cast<double>(confusion.counts[p][p]) / static_cast<double>(column);
  }
  return out;
}

std::vector<double> per_class_recall(const ConfusionMatrix& confusion) {
  const std::size_t k = confusion.class_count();
  std::vector<double> out(k, 0.0);
  for (std::size_t t = 0; t < k; ++t) {
    std::size_t row = 0;
    for (std::size_t v : confusion.counts[t]) row += v;
    if (row > 0) out[t] = static_cast<double>(confusion.counts[t][t]) / static_cast<double>(row);
  }
  return out;
}

EvalReport evaluate_model(const TrainedModel& model, const CleanDataset& train,
                          const CleanDataset& test) {
  EvalReport report;
  report.variant = model.variant;

  report.train_confusion =
      confusion_matrix(train.labels, predict_all(model, train.features), model.class_count());
  report.train_confusion.class_names = model.class_names;
  report.confusion =
      confusion_matrix(test.labels, predict_all(model, test.features), model.class_count());
  report.confusion.class_names = model.class_names;

  report.train_accuracy = accuracy(report.train_confusion);
  report.test_accuracy = accuracy(report.confusion);
  report.precision = per_class_precision(report.confusion);
  report.recall = per_class_recall(report.confusion);
  return report;
}

const EvalReport& ComparisonReport::report_for(Variant v) const {
  for (const auto& r : reports) {
    if (r.variant == v) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "no report for variant " + std::string(to_string(v)));
}

namespace {

void check_lineage(const VariantData& reference, const VariantData& other, TransformTag expected,
                   const char* path) {
  const auto same = [](const CleanDataset& a, const CleanDataset& b) {
    return a.labels == b.labels && a.class_names == b.class_names &&
           a.column_names == b.column_names;
  };
  if (!same(reference.train, other.train) || !same(reference.test, other.test)) {
    throw Error(ErrorCode::ManifestMismatch,
                std::string(path) + " datasets do not share rows, labels and columns with the "
                                    "continuous path");
  }
  if (other.train.transform_tag != expected || other.test.transform_tag != expected) {
    throw Error(ErrorCode::ManifestMismatch,
                std::string(path) + " datasets carry the wrong transform tag");
  }
}

nlohmann::ordered_json confusion_json(const ConfusionMatrix& cm) {
  return cm.counts;
}

}  // namespace

std::vector<Variant> rank_by_test_accuracy(const std::vector<EvalReport>& reports) {
  std::vector<std::size_t> order(reports.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return reports[a].test_accuracy > reports[b].test_accuracy;
  });
  std::vector<Variant> ranking;
  for (std::size_t i : order) ranking.push_back(reports[i].variant);
  return ranking;
}

ComparisonReport compare_variants(const ComparisonInputs& inputs, const FitConfig& config) {
  if (inputs.continuous.train.transform_tag != TransformTag::continuous ||
      inputs.continuous.test.transform_tag != TransformTag::continuous) {
    throw Error(ErrorCode::ManifestMismatch, "continuous datasets carry the wrong transform tag");
  }
  check_lineage(inputs.continuous, inputs.counts, TransformTag::counts, "counts");
  check_lineage(inputs.continuous, inputs.binary, TransformTag::binary, "binary");

  ComparisonReport out;
  out.train_rows = inputs.continuous.train.rows();
  out.test_rows = inputs.continuous.test.rows();
  out.class_names = inputs.continuous.train.class_names;
  out.feature_names = inputs.continuous.train.column_names;

  const auto run = [&](Variant v, const VariantData& data) {
    const TrainedModel model = fit(v, data.train, config);
    out.reports.push_back(evaluate_model(model, data.train, data.test));
  };
  run(Variant::gaussian, inputs.continuous);
  run(Variant::multinomial, inputs.counts);
  run(Variant::bernoulli, inputs.binary);

  out.ranking = rank_by_test_accuracy(out.reports);
  return out;
}

std::string ComparisonReport::to_json() const {
  using Json = nlohmann::ordered_json;
  Json doc;
  doc["version"] = 1;

  Json meta;
  meta["seed"] = metadata.seed;
  meta["input_digest"] = metadata.input_digest;
  meta["manifest_digest"] = metadata.manifest_digest;
  meta["train_rows"] = train_rows;
  meta["test_rows"] = test_rows;
  meta["train_accuracy_scope"] = metadata.train_accuracy_scope;
  meta["class_names"] = class_names;
  meta["feature_names"] = feature_names;
  try {
    meta["run_config"] = Json::parse(metadata.run_config_json.empty() ? "{}" : metadata.run_config_json);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("run config: ") + e.what());
  }
  doc["metadata"] = std::move(meta);

  Json ranking = Json::array();
  for (Variant v : this->ranking) ranking.push_back(std::string(to_string(v)));
  doc["ranking"] = std::move(ranking);

  Json variants = Json::array();
  for (const auto& r : reports) {
    Json entry;
    entry["variant"] = std::string(to_string(r.variant));
    entry["train_accuracy"] = r.train_accuracy;
    entry["test_accuracy"] = r.test_accuracy;
    entry["overfit_gap"] = r.overfit_gap();
    Json per_class = Json::array();
    for (std::size_t c = 0; c < r.precision.size(); ++c) {
      per_class.push_back({{"class", c < class_names.size() ? class_names[c] : std::to_string(c)},
                           {"precision", r.precision[c]},
                           {"recall", r.recall[c]}});
    }
    entry["per_class"] = std::move(per_class);
    entry["test_confusion"] = confusion_json(r.confusion);
    entry["train_confusion"] = confusion_json(r.train_confusion);
    variants.push_back(std::move(entry));
  }
  doc["variants"] = std::move(variants);
  return doc.dump(2) + "\n";
}

}  // namespace bayesnid
