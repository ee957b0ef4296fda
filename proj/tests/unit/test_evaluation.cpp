#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "bayesnid/error.hpp"
#include "bayesnid/evaluation.hpp"
#include "bayesnid/preprocess.hpp"
#include "fixtures.hpp"

using namespace bayesnid;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

/// Builds the three transform paths from one continuous train/test pair.
ComparisonInputs paths(const CleanDataset& train, const CleanDataset& test) {
  ComparisonInputs in;
  in.continuous = {train, test};
  const auto counts = CountTransform::fit(train);
  in.counts = {counts.apply(train), counts.apply(test)};
  const auto bins = BinarizeTransform::fit(train);
  in.binary = {bins.apply(train), bins.apply(test)};
  return in;
}

CleanDataset clouds(std::size_t per_class, std::size_t classes, double spacing, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;
  for (std::size_t r = 0; r < per_class * classes; ++r) {
    const std::size_t c = r % classes;
    const double center = 100.0 + spacing * static_cast<double>(c);
    rows.push_back({center + g(rng), center + g(rng)});
    labels.push_back(c);
  }
  return fixtures::make_dataset(rows, labels, fixtures::class_names(classes));
}

}  // namespace

TEST(ConfusionMatrix, HandTally) {
  const std::vector<ClassId> truth{0, 1, 1}, pred{0, 0, 1};
  const auto cm = confusion_matrix(truth, pred, 2);
  EXPECT_EQ(cm.counts, (std::vector<std::vector<std::size_t>>{{1, 0}, {1, 1}}));
  EXPECT_NEAR(accuracy(cm), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(per_class_precision(cm), (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(per_class_recall(cm), (std::vector<double>{1.0, 0.5}));
}

TEST(ConfusionMatrix, PerfectAndCollapsed) {
  const std::vector<ClassId> truth{0, 1, 2, 2};
  const auto perfect = confusion_matrix(truth, truth, 3);
  EXPECT_EQ(perfect.counts, (std::vector<std::vector<std::size_t>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
  EXPECT_EQ(accuracy(perfect), 1.0);

  const std::vector<ClassId> zeros(4, 0);
  const auto collapsed = confusion_matrix(truth, zeros, 3);
  for (const auto& row : collapsed.counts) {
    EXPECT_EQ(row[1], 0u);
    EXPECT_EQ(row[2], 0u);
  }
  // Never-predicted classes have precision 0 rather than NaN.
  EXPECT_EQ(per_class_precision(collapsed), (std::vector<double>{0.25, 0.0, 0.0}));

  const std::vector<ClassId> shifted{1, 2, 0, 0};
  EXPECT_EQ(accuracy(confusion_matrix(truth, shifted, 3)), 0.0);
}

TEST(ConfusionMatrix, ErrorPaths) {
  const std::vector<ClassId> a{0, 1}, b{0}, c{0, 5};
  EXPECT_EQ(code_of([&] { confusion_matrix(a, b, 2); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([&] { confusion_matrix(a, c, 2); }), ErrorCode::IdOutOfRange);
  const std::vector<ClassId> empty;
  EXPECT_EQ(code_of([&] { accuracy(confusion_matrix(empty, empty, 2)); }), ErrorCode::EmptyEvaluation);
}

TEST(ConfusionMatrix, AccuracyInvariantUnderLabelPermutation) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<ClassId> pick(0, 3);
  std::vector<ClassId> truth(100), pred(100);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = pick(rng);
    pred[i] = pick(rng);
  }
  const std::vector<ClassId> perm{2, 0, 3, 1};
  std::vector<ClassId> pt, pp;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    pt.push_back(perm[truth[i]]);
    pp.push_back(perm[pred[i]]);
  }
  EXPECT_EQ(accuracy(confusion_matrix(truth, pred, 4)), accuracy(confusion_matrix(pt, pp, 4)));
  EXPECT_EQ(confusion_matrix(truth, pred, 4).total(), 100u);
}

TEST(Ranking, StableTieBreakInDeclarationOrder) {
  std::vector<EvalReport> reports(3);
  reports[0].variant = Variant::gaussian;
  reports[1].variant = Variant::multinomial;
  reports[2].variant = Variant::bernoulli;
  reports[0].test_accuracy = 0.5;
  reports[1].test_accuracy = 0.7;
  reports[2].test_accuracy = 0.5;
  EXPECT_EQ(rank_by_test_accuracy(reports),
            (std::vector<Variant>{Variant::multinomial, Variant::gaussian, Variant::bernoulli}));
  reports[1].test_accuracy = 0.5;
  EXPECT_EQ(rank_by_test_accuracy(reports),
            (std::vector<Variant>{Variant::gaussian, Variant::multinomial, Variant::bernoulli}));
}

TEST(CompareVariants, SeparableClustersGiveGaussianPerfectScore) {
  const auto data = clouds(60, 3, 50.0, 9);
  const auto [train, test] = stratified_split(data, SplitSpec{0.3, 1, true});
  const auto report = compare_variants(paths(train, test));
  EXPECT_EQ(report.report_for(Variant::gaussian).test_accuracy, 1.0);
  EXPECT_EQ(report.reports.size(), 3u);
  EXPECT_EQ(report.train_rows, train.rows());
  EXPECT_EQ(report.test_rows, test.rows());
  EXPECT_EQ(report.ranking.front(), Variant::gaussian);
}

TEST(CompareVariants, IndistinguishableCloudsNearChance) {
  // Every class is drawn from the same distribution.
  auto data = clouds(300, 3, 0.0, 12);
  const auto [train, test] = stratified_split(data, SplitSpec{0.3, 2, true});
  const auto report = compare_variants(paths(train, test));
  for (const auto& r : report.reports) EXPECT_NEAR(r.test_accuracy, 1.0 / 3.0, 0.12);
  EXPECT_EQ(report.ranking.size(), 3u);
}

TEST(CompareVariants, LineageMismatchRejected) {
  const auto data = clouds(20, 2, 10.0, 1);
  const auto [train, test] = stratified_split(data, SplitSpec{0.3, 1, true});
  auto in = paths(train, test);
  in.binary.test.labels.front() = 1 - in.binary.test.labels.front();
  EXPECT_EQ(code_of([&] { compare_variants(in); }), ErrorCode::ManifestMismatch);
  in = paths(train, test);
  in.counts.train.transform_tag = TransformTag::binary;
  EXPECT_EQ(code_of([&] { compare_variants(in); }), ErrorCode::ManifestMismatch);
}

TEST(ComparisonReport, JsonIsStableAndComplete) {
  const auto data = clouds(20, 2, 10.0, 1);
  const auto [train, test] = stratified_split(data, SplitSpec{0.3, 1, true});
  auto report = compare_variants(paths(train, test));
  report.metadata.seed = 1;
  report.metadata.run_config_json = R"({"k":3})";
  const auto text = report.to_json();
  EXPECT_EQ(text, report.to_json());
  const auto doc = nlohmann::json::parse(text);
  EXPECT_EQ(doc["metadata"]["run_config"]["k"], 3);
  EXPECT_EQ(doc["variants"].size(), 3u);
  EXPECT_EQ(doc["variants"][0]["variant"], "gaussian");
  EXPECT_TRUE(doc["variants"][0].contains("overfit_gap"));
  EXPECT_EQ(doc["ranking"].size(), 3u);
}
