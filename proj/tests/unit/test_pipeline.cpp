#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "bayesnid/csv.hpp"
#include "bayesnid/error.hpp"
#include "bayesnid/pipeline.hpp"
#include "bayesnid/report.hpp"
#include "bayesnid/synth.hpp"
#include "fixtures.hpp"

using namespace bayesnid;
namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

CommandResult run_cli(const std::string& args) {
  const std::string command = std::string("\"") + BAYESNID_CLI_PATH + "\" " + args + " 2>/dev/null";
  CommandResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// Ten rows, two classes. Column a: NaN (row 2) and empty (row 5) -> 2 missing.
// Column b: -1 (row 3) -> 1 negative; Infinity (row 7) -> 1 missing.
// Column c: clean. Column d: -Infinity (row 9) -> 1 missing, -4 (row 1) -> 1 negative.
constexpr const char* kAuditFixture =
    "a,b,c,d,Label\n"
    "1,10,5,-4,BENIGN\n"
    "NaN,11,5,2,DoS Hulk\n"
    "3,-1,6,3,BENIGN\n"
    "4,12,6,4,DoS Hulk\n"
    ",13,7,5,BENIGN\n"
    "6,14,7,6,DoS Hulk\n"
    "7,Infinity,8,7,BENIGN\n"
    "8,15,8,8,DoS Hulk\n"
    "9,16,9,-Infinity,BENIGN\n"
    "10,17,9,10,DoS Hulk\n";

fs::path write_fixture(const fixtures::TempDir& dir, const std::string& name, const std::string& text) {
  const auto path = dir.path() / name;
  write_text_file(path, text);
  return path;
}

fs::path write_synth(const fixtures::TempDir& dir, const SynthConfig& config) {
  std::ostringstream out;
  write_synthetic_csv(config, out);
  return write_fixture(dir, "synth.csv", out.str());
}

}  // namespace

TEST(Synth, ZeroRowsIsHeaderOnly) {
  SynthConfig config;
  config.rows_per_class = 0;
  config.features = 3;
  std::ostringstream out;
  write_synthetic_csv(config, out);
  EXPECT_EQ(out.str(), "feature_00,feature_01,feature_02,Label\n");
}

TEST(Synth, SameSeedSameBytes) {
  SynthConfig config;
  config.rows_per_class = 50;
  config.defect_rate = 0.1;
  std::ostringstream a, b, c;
  write_synthetic_csv(config, a);
  write_synthetic_csv(config, b);
  config.seed += 1;
  write_synthetic_csv(config, c);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str(), c.str());
}

TEST(Synth, DefectRateMatchesAbsentCellCount) {
  SynthConfig config;
  config.rows_per_class = 500;
  config.defect_rate = 0.1;
  std::ostringstream out;
  write_synthetic_csv(config, out);
  std::istringstream in(out.str());
  const auto table = read_csv(in);
  const double cells = static_cast<double>(table.rows() * table.column_count());
  EXPECT_EQ(table.rows(), 3000u);
  EXPECT_NEAR(static_cast<double>(table.missing_cells()) / cells, 0.1, 0.01);
}

TEST(Synth, RejectsBadConfig) {
  SynthConfig config;
  config.features = 0;
  std::ostringstream out;
  EXPECT_THROW(write_synthetic_csv(config, out), Error);
  config.features = 2;
  config.defect_rate = 1.5;
  EXPECT_THROW(write_synthetic_csv(config, out), Error);
}

TEST(RunClean, DefectSummaryMatchesHandAudit) {
  std::istringstream in(kAuditFixture);
  const auto table = read_csv(in);
  RunConfig config;
  config.split.test_fraction = 0.4;
  const auto clean = run_clean(table, config);
  ASSERT_EQ(clean.defect_summary.size(), 4u);
  const std::vector<std::size_t> missing{2, 1, 0, 1}, negative{0, 1, 0, 1};
  for (std::size_t c = 0; c < 4; ++c) {
    EXPECT_EQ(clean.defect_summary[c].missing_count, missing[c]) << c;
    EXPECT_EQ(clean.defect_summary[c].negative_count, negative[c]) << c;
  }
  EXPECT_EQ(clean.filled_cells, 4u);
  EXPECT_EQ(clean.clamped_cells, 2u);
  EXPECT_EQ(clean.manifest.train_rows, 6u);
  EXPECT_EQ(clean.manifest.test_rows, 4u);
  for (const VariantData* d : {&clean.data.continuous, &clean.data.counts, &clean.data.binary}) {
    d->train.validate();
    d->test.validate();
  }
}

TEST(RunClean, StatisticsComeFromTrainingRowsOnly) {
  std::istringstream in(kAuditFixture);
  const auto table = read_csv(in);
  RunConfig config;
  config.split.test_fraction = 0.4;
  const auto clean = run_clean(table, config);
  const auto train_stats = compute_column_stats(table.subset_rows(
      split_indices(LabelMap::from_labels(table.labels).encode(table.labels), 2, config.split).train));
  ASSERT_EQ(clean.manifest.imputation.size(), train_stats.size());
  for (std::size_t c = 0; c < train_stats.size(); ++c) {
    EXPECT_EQ(clean.manifest.imputation[c].mean, train_stats[c].mean);
  }
}

TEST(Manifest, JsonRoundTrip) {
  std::istringstream in(kAuditFixture);
  const auto clean = run_clean(read_csv(in), RunConfig{}, "abc");
  const auto text = clean.manifest.to_json();
  const auto back = TransformManifest::from_json(text);
  EXPECT_EQ(back.to_json(), text);
  EXPECT_EQ(back.input_digest, "abc");
  EXPECT_THROW(TransformManifest::from_json("{}"), Error);
}

TEST(RunConfig, JsonRoundTripOmitsOutputDir) {
  RunConfig c;
  c.k = 7;
  c.select = SelectionMethod::chi2_topk;
  c.split.seed = 9;
  c.out_dir = "/tmp/elsewhere";
  c.signed_columns = {"delta"};
  const auto text = c.to_json();
  EXPECT_EQ(text.find("elsewhere"), std::string::npos);
  const auto back = RunConfig::from_json(text);
  EXPECT_EQ(back.k, 7u);
  EXPECT_EQ(back.select, SelectionMethod::chi2_topk);
  EXPECT_EQ(back.split.seed, 9u);
  EXPECT_EQ(back.signed_columns, c.signed_columns);
  EXPECT_EQ(back.to_json(), text);
  EXPECT_THROW(RunConfig::from_json("[1]"), Error);
}

TEST(RunCompare, ProducesEveryArtifactAndStagesAgree) {
  fixtures::TempDir dir("compare");
  SynthConfig synth;
  synth.rows_per_class = 60;
  synth.features = 6;
  synth.classes = 3;
  synth.defect_rate = 0.05;
  RunConfig config;
  config.input = write_synth(dir, synth);
  config.out_dir = dir.path() / "out";
  const auto report = run_compare(config);

  for (const char* name :
       {"manifest.json", "selection.json", "comparison.json", "train_continuous.csv",
        "test_continuous.csv", "train_counts.csv", "test_counts.csv", "train_binary.csv",
        "test_binary.csv", "model_gaussian.json", "model_multinomial.json", "model_bernoulli.json",
        "accuracy_table.csv", "confusion_gaussian.csv", "confusion_multinomial.csv",
        "confusion_bernoulli.csv", "fig_train_test.svg", "fig_box.svg",
        "fig_confusion_gaussian.svg", "fig_confusion_multinomial.svg",
        "fig_confusion_bernoulli.svg"}) {
    EXPECT_TRUE(fs::exists(config.out_dir / name)) << name;
  }
  const auto comparison = read_text_file(config.out_dir / "comparison.json");
  const auto doc = nlohmann::json::parse(comparison);
  EXPECT_EQ(doc["metadata"]["input_digest"].get<std::string>().size(), 64u);

  // Re-evaluating the saved models reproduces the same report bytes.
  const auto again = evaluate_saved(config.out_dir, config);
  EXPECT_EQ(read_text_file(config.out_dir / "comparison.json"), comparison);
  for (Variant v : kAllVariants) {
    EXPECT_EQ(again.report_for(v).test_accuracy, report.report_for(v).test_accuracy);
  }
}

TEST(Cli, CleanProducesDatasetsAndManifest) {
  fixtures::TempDir dir("cli_clean");
  const auto input = write_fixture(dir, "audit.csv", kAuditFixture);
  const auto out = dir.path() / "out";
  const auto r = run_cli("clean --input \"" + input.string() + "\" --test-fraction 0.4 --out \"" +
                         out.string() + "\"");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  for (const char* name : {"train_continuous.csv", "test_continuous.csv", "train_counts.csv",
                           "test_counts.csv", "train_binary.csv", "test_binary.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  // TOTAL row of the defect summary: 4 missing, 2 negative.
  std::istringstream lines(r.out);
  std::string line;
  bool saw_total = false;
  while (std::getline(lines, line)) {
    if (!line.starts_with("TOTAL")) continue;
    std::istringstream fields(line.substr(5));
    std::size_t missing = 0, negative = 0;
    fields >> missing >> negative;
    EXPECT_EQ(missing, 4u);
    EXPECT_EQ(negative, 2u);
    saw_total = true;
  }
  EXPECT_TRUE(saw_total) << r.out;
}

TEST(Cli, StagedRunMatchesCompare) {
  fixtures::TempDir dir("cli_stages");
  SynthConfig synth;
  synth.rows_per_class = 40;
  synth.features = 5;
  synth.classes = 3;
  const auto input = write_synth(dir, synth);
  const auto staged = dir.path() / "staged";
  const auto whole = dir.path() / "whole";
  const std::string in = " --input \"" + input.string() + "\"";
  ASSERT_EQ(run_cli("clean" + in + " --out \"" + staged.string() + "\"").exit_code, 0);
  ASSERT_EQ(run_cli("select --out \"" + staged.string() + "\"").exit_code, 0);
  ASSERT_EQ(run_cli("train --out \"" + staged.string() + "\"").exit_code, 0);
  ASSERT_EQ(run_cli("evaluate --out \"" + staged.string() + "\"").exit_code, 0);
  ASSERT_EQ(run_cli("compare" + in + " --out \"" + whole.string() + "\"").exit_code, 0);
  for (const char* name : {"accuracy_table.csv", "confusion_gaussian.csv", "fig_train_test.svg"}) {
    EXPECT_EQ(read_text_file(staged / name), read_text_file(whole / name)) << name;
  }
}

TEST(Cli, ExitCodes) {
  fixtures::TempDir dir("cli_exit");
  const auto no_label = write_fixture(dir, "nolabel.csv", "a,b\n1,2\n3,4\n");
  EXPECT_EQ(run_cli("clean --input \"" + no_label.string() + "\" --out \"" +
                    (dir.path() / "o").string() + "\"")
                .exit_code,
            2);
  EXPECT_EQ(run_cli("clean --input \"" + (dir.path() / "missing.csv").string() + "\"").exit_code, 2);
  EXPECT_EQ(run_cli("compare --bogus-flag").exit_code, 2);
  EXPECT_EQ(run_cli("").exit_code, 2);
  EXPECT_EQ(run_cli("--help").exit_code, 0);
}

TEST(Cli, SynthHeaderOnlyAndFlagPrecedence) {
  const auto r = run_cli("synth --n-per-class 0 --features 2");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "feature_00,feature_01,Label\n");

  fixtures::TempDir dir("cli_precedence");
  SynthConfig synth;
  synth.rows_per_class = 20;
  synth.features = 3;
  synth.classes = 2;
  const auto input = write_synth(dir, synth);
  const auto config = write_fixture(dir, "run.json", R"({"seed":5,"select":{"method":"chi2","k":2}})");
  const auto out = dir.path() / "out";
  const auto res = run_cli("compare --input \"" + input.string() + "\" --config \"" + config.string() +
                           "\" --k 1 --out \"" + out.string() + "\"");
  ASSERT_EQ(res.exit_code, 0) << res.out;
  const auto doc = nlohmann::json::parse(read_text_file(out / "comparison.json"));
  const auto& rc = doc["metadata"]["run_config"];
  EXPECT_EQ(rc["select"]["k"], 1);
  EXPECT_EQ(rc["select"]["method"], "chi2");
  EXPECT_EQ(doc["metadata"]["seed"], 5);
}

TEST(Cli, EnvironmentOverridesConfigButNotFlags) {
  fixtures::TempDir dir("cli_env");
  SynthConfig synth;
  synth.rows_per_class = 20;
  synth.features = 3;
  synth.classes = 2;
  const auto input = write_synth(dir, synth);
  const auto config = write_fixture(dir, "run.json", R"({"seed":5})");
  const std::string base = "compare --input \"" + input.string() + "\" --config \"" + config.string() + "\"";
  ::setenv("BAYESNID_SEED", "7", 1);
  const int env_only = run_cli(base + " --out \"" + (dir.path() / "env").string() + "\"").exit_code;
  const int with_flag = run_cli(base + " --seed 9 --out \"" + (dir.path() / "flag").string() + "\"").exit_code;
  ::unsetenv("BAYESNID_SEED");
  ASSERT_EQ(env_only, 0);
  ASSERT_EQ(with_flag, 0);
  const auto seed_of = [&](const char* sub) {
    return nlohmann::json::parse(read_text_file(dir.path() / sub / "comparison.json"))["metadata"]["seed"]
        .get<int>();
  };
  EXPECT_EQ(seed_of("env"), 7);
  EXPECT_EQ(seed_of("flag"), 9);
}
