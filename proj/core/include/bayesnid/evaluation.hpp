#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bayesnid/dataset.hpp"
#include "bayesnid/naive_bayes.hpp"

namespace bayesnid {

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::string> class_names;

  std::size_t class_count() const noexcept { return counts.size(); }
  std::size_t total() const;
  std::size_t trace() const;
};

ConfusionMatrix confusion_matrix(std::span<const ClassId> truth, std::span<const ClassId> predicted,
                                 std::size_t class_count);

/// trace / total; throws EmptyEvaluation when total is zero.
double accuracy(const ConfusionMatrix& confusion);

/// tp / predicted-count; 0 for a class never predicted.
std::vector<double> per_class_precision(const ConfusionMatrix& confusion);
/// tp / true-count; 0 for a class absent from the truth.
std::vector<double> per_class_recall(const ConfusionMatrix& confusion);

struct EvalReport {
  Variant variant = Variant::gaussian;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  ConfusionMatrix train_confusion;
  ConfusionMatrix confusion;  // test partition
  std::vector<double> precision;
  std::vector<double> recall;

  double overfit_gap() const noexcept { return train_accuracy - test_accuracy; }
};

EvalReport evaluate_model(const TrainedModel& model, const CleanDataset& train,
                          const CleanDataset& test);

/// Train/test pair for one variant's transform path.
struct VariantData {
  CleanDataset train;
  CleanDataset test;
};

struct ComparisonInputs {
  VariantData continuous;
  VariantData counts;
  VariantData binary;
};

/// Provenance recorded alongside the comparison.
struct ReportMetadata {
  std::uint64_t seed = 0;
  std::string input_digest;
  std::string manifest_digest;
  /// Serialized run configuration (JSON object text); embedded verbatim.
  std::string run_config_json = "{}";
  std::string train_accuracy_scope = "full training partition";
};

struct ComparisonReport {
  std::vector<EvalReport> reports;  // declaration order: gaussian, multinomial, bernoulli
  std::vector<Variant> ranking;     // by test accuracy, ties in declaration order
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;

  ReportMetadata metadata;

  const EvalReport& report_for(Variant v) const;

  /// Stable key order; byte-identical for identical inputs.
  std::string to_json() const;
};

/// Variants ordered by test accuracy, ties kept in report order.
std::vector<Variant> rank_by_test_accuracy(const std::vector<EvalReport>& reports);

/// Fits every variant on its own transform path and ranks by test accuracy.
/// Throws ManifestMismatch when the three paths do not share rows, labels and classes.
ComparisonReport compare_variants(const ComparisonInputs& inputs, const FitConfig& config = {});

}  // namespace bayesnid
