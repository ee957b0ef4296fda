// bayesnid: clean -> select -> train -> evaluate -> compare, plus a synthetic
// fixture generator. Exit codes: 0 success, 1 internal error, 2 input error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bayesnid/digest.hpp"
#include "bayesnid/error.hpp"
#include "bayesnid/model_io.hpp"
#include "bayesnid/pipeline.hpp"
#include "bayesnid/preprocess.hpp"
#include "bayesnid/report.hpp"
#include "bayesnid/synth.hpp"

namespace {

using namespace bayesnid;

constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

// Flag values are bound here; RunConfig is assembled after parsing so that
// precedence is defaults < --config file < BAYESNID_* env < flags.
struct RunFlags {
  std::string config_path;
  std::string input;
  std::string label_col = "Label";
  double test_fraction = 0.3;
  std::uint64_t seed = 42;
  std::string select = "corr";
  std::size_t k = 10;
  double corr_threshold = 0.5;
  std::size_t bins = 10;
  double alpha = 1.0;
  double var_eps = 1e-9;
  std::string out = "out";
  std::vector<std::string> signed_cols;
  std::vector<std::string> class_order;
  bool dos_classes = false;
  bool no_stratify = false;

  struct Bound {
    CLI::Option* input = nullptr;
    CLI::Option* label_col = nullptr;
    CLI::Option* test_fraction = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* select = nullptr;
    CLI::Option* k = nullptr;
    CLI::Option* corr_threshold = nullptr;
    CLI::Option* bins = nullptr;
    CLI::Option* alpha = nullptr;
    CLI::Option* var_eps = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* signed_cols = nullptr;
    CLI::Option* class_order = nullptr;
    CLI::Option* dos_classes = nullptr;
    CLI::Option* no_stratify = nullptr;
  } bound;
};

enum Stage : unsigned {
  kIngest = 1u << 0,
  kSelect = 1u << 1,
  kFit = 1u << 2,
};

void add_run_options(CLI::App& cmd, RunFlags& f, unsigned stages) {
  cmd.add_option("--config", f.config_path, "JSON run configuration (e.g. an archived report's run_config)")
      ->check(CLI::ExistingFile);
  f.bound.out = cmd.add_option("--out", f.out, "Output directory")->envname("BAYESNID_OUT");
  if (stages & kIngest) {
    f.bound.input = cmd.add_option("--input", f.input, "Flow-feature CSV")->envname("BAYESNID_INPUT");
    f.bound.label_col =
        cmd.add_option("--label-col", f.label_col, "Label column name")->envname("BAYESNID_LABEL_COL");
    f.bound.test_fraction = cmd.add_option("--test-fraction", f.test_fraction, "Test partition fraction")
                                ->envname("BAYESNID_TEST_FRACTION");
    f.bound.seed = cmd.add_option("--seed", f.seed, "Split seed")->envname("BAYESNID_SEED");
    f.bound.signed_cols = cmd.add_option("--signed-cols", f.signed_cols,
                                         "Columns exempt from negative clamping")
                              ->delimiter(',');
    f.bound.class_order =
        cmd.add_option("--class-order", f.class_order, "Fixed class encoding order")->delimiter(',');
    f.bound.dos_classes = cmd.add_flag("--dos-classes", f.dos_classes,
                                         "Encode the six DoS traffic classes as ids 0..5");
    f.bound.no_stratify = cmd.add_flag("--no-stratify", f.no_stratify, "Plain random split");
  }
  if (stages & kSelect) {
    f.bound.select = cmd.add_option("--select", f.select, "Feature selection method")
                         ->check(CLI::IsMember({"chi2", "corr"}))
                         ->envname("BAYESNID_SELECT");
    f.bound.k = cmd.add_option("--k", f.k, "Features kept by chi2 selection")->envname("BAYESNID_K");
    f.bound.corr_threshold = cmd.add_option("--corr-threshold", f.corr_threshold,
                                            "Minimum |correlation| with the label")
                                 ->envname("BAYESNID_CORR_THRESHOLD");
    f.bound.bins = cmd.add_option("--bins", f.bins, "Quantile bins for chi2 scoring")
                       ->check(CLI::PositiveNumber)
                       ->envname("BAYESNID_BINS");
  }
  if (stages & kFit) {
    f.bound.alpha = cmd.add_option("--alpha", f.alpha, "Multinomial smoothing constant")
                        ->envname("BAYESNID_ALPHA");
    f.bound.var_eps = cmd.add_option("--var-eps", f.var_eps, "Gaussian variance floor ratio")
                          ->envname("BAYESNID_VAR_EPS");
  }
}

bool given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

RunConfig assemble(const RunFlags& f) {
  RunConfig c;
  if (!f.config_path.empty()) c = RunConfig::from_json(read_text_file(f.config_path));
  const auto& b = f.bound;
  if (given(b.input)) c.input = f.input;
  if (given(b.label_col)) c.label_column = f.label_col;
  if (given(b.test_fraction)) c.split.test_fraction = f.test_fraction;
  if (given(b.seed)) c.split.seed = f.seed;
  if (given(b.no_stratify)) c.split.stratified = !f.no_stratify;
  if (given(b.signed_cols)) c.signed_columns = f.signed_cols;
  if (given(b.class_order)) c.class_order = f.class_order;
  if (given(b.dos_classes) && f.dos_classes) c.class_order = default_attack_classes();
  if (given(b.select)) c.select = selection_method_from_string(f.select);
  if (given(b.k)) c.k = f.k;
  if (given(b.corr_threshold)) c.corr_threshold = f.corr_threshold;
  if (given(b.bins)) c.bins = f.bins;
  if (given(b.alpha)) c.fit.alpha = f.alpha;
  if (given(b.var_eps)) c.fit.var_epsilon = f.var_eps;
  if (given(b.out)) c.out_dir = f.out;
  return c;
}

void print_defect_summary(const CleanResult& clean) {
  std::size_t missing = 0;
  std::size_t negative = 0;
  std::printf("%-40s %10s %10s\n", "column", "missing", "negative");
  for (const auto& s : clean.defect_summary) {
    missing += s.missing_count;
    negative += s.negative_count;
    if (s.missing_count == 0 && s.negative_count == 0) continue;
    std::printf("%-40s %10zu %10zu%s\n", s.name.c_str(), s.missing_count, s.negative_count,
                s.all_missing ? "  (all missing)" : "");
  }
  std::printf("%-40s %10zu %10zu\n", "TOTAL", missing, negative);
  for (const auto& name : clean.manifest.dropped_columns) {
    std::printf("dropped column: %s\n", name.c_str());
  }
  std::printf("rows: train %zu, test %zu; classes %zu; filled %zu cells, clamped %zu cells\n",
              clean.manifest.train_rows, clean.manifest.test_rows,
              clean.manifest.class_names.size(), clean.filled_cells, clean.clamped_cells);
}

void print_report(const ComparisonReport& report) {
  std::printf("%-12s %14s %14s %12s\n", "variant", "train_acc", "test_acc", "gap");
  for (Variant v : report.ranking) {
    const auto& r = report.report_for(v);
    std::printf("%-12s %14.6f %14.6f %12.6f\n", std::string(to_string(v)).c_str(), r.train_accuracy,
                r.test_accuracy, r.overfit_gap());
  }
}

void require_input(const RunConfig& c) {
  if (c.input.empty()) throw Error(ErrorCode::InvalidArgument, "--input is required");
}

int cmd_synth(const SynthConfig& config, const std::string& out) {
  if (out.empty() || out == "-") {
    write_synthetic_csv(config, std::cout);
    return 0;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoFailure, "cannot write '" + out + "'");
  write_synthetic_csv(config, file);
  return 0;
}

int cmd_clean(const RunConfig& c) {
  require_input(c);
  const RawTable table = load_csv(c.input, CsvOptions{c.label_column});
  const CleanResult clean = run_clean(table, c, sha256_file(c.input));
  write_clean_outputs(clean, c.out_dir);
  print_defect_summary(clean);
  return 0;
}

int cmd_select(const RunConfig& c) {
  CleanResult clean = load_clean_outputs(c.out_dir);
  const SelectionReport selection = run_select(clean, c);
  if (selection.empty_selection) {
    std::fprintf(stderr, "warning: no feature passed the threshold; all features are kept\n");
  }
  apply_selection(clean, selection);
  write_text_file(c.out_dir / files::selection, selection.to_json());
  write_text_file(c.out_dir / files::manifest, clean.manifest.to_json());
  std::printf("selected %zu of %zu features\n", selection.selected.size(), selection.scores.size());
  for (std::size_t i : selection.selected) {
    std::printf("  %-40s %.6f\n", selection.feature_names[i].c_str(), selection.scores[i]);
  }
  return 0;
}

int cmd_train(const RunConfig& c) {
  CleanResult clean = load_clean_outputs(c.out_dir);
  if (clean.manifest.selection) {
    const SelectionReport selection = *clean.manifest.selection;
    apply_selection(clean, selection);
  }
  const TrainedSet models = train_all(clean, c.fit);
  for (Variant v : kAllVariants) {
    write_text_file(c.out_dir / files::model(v), serialize_model(models.get(v)));
    std::printf("wrote %s\n", (c.out_dir / files::model(v)).string().c_str());
  }
  return 0;
}

int cmd_evaluate(const RunConfig& c) {
  print_report(evaluate_saved(c.out_dir, c));
  return 0;
}

int cmd_compare(const RunConfig& c) {
  require_input(c);
  print_report(run_compare(c));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Naive Bayes variants for network intrusion detection"};
  app.require_subcommand(1);

  SynthConfig synth;
  std::string synth_out = "-";
  auto* synth_cmd = app.add_subcommand("synth", "Generate a Gaussian class-cloud CSV fixture");
  synth_cmd->add_option("--n-per-class", synth.rows_per_class, "Rows per class");
  synth_cmd->add_option("--features", synth.features, "Feature count")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--classes", synth.classes, "Class count")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")->envname("BAYESNID_SEED");
  synth_cmd->add_option("--separation", synth.separation, "Class mean spacing in feature std units");
  synth_cmd->add_option("--ordered-fraction", synth.ordered_fraction,
                        "Fraction of features whose class means follow class id order");
  synth_cmd->add_option("--defect-rate", synth.defect_rate, "Fraction of absent cells");
  synth_cmd->add_option("--negative-rate", synth.negative_rate, "Fraction of sign-flipped cells");
  synth_cmd->add_option("--label-col", synth.label_column, "Label column name");
  synth_cmd->add_option("--out", synth_out, "Output CSV path ('-' for stdout)");

  RunFlags clean_flags, select_flags, train_flags, eval_flags, compare_flags;
  auto* clean_cmd = app.add_subcommand("clean", "Impute, encode, split and transform a raw CSV");
  add_run_options(*clean_cmd, clean_flags, kIngest);
  auto* select_cmd = app.add_subcommand("select", "Score and select features on the cleaned data");
  add_run_options(*select_cmd, select_flags, kSelect);
  auto* train_cmd = app.add_subcommand("train", "Fit the three variants on the cleaned data");
  add_run_options(*train_cmd, train_flags, kFit);
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate saved models and emit the report");
  add_run_options(*eval_cmd, eval_flags, 0);
  auto* compare_cmd = app.add_subcommand("compare", "Run the full pipeline and emit the report");
  add_run_options(*compare_cmd, compare_flags, kIngest | kSelect | kFit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*synth_cmd) return cmd_synth(synth, synth_out);
    if (*clean_cmd) return cmd_clean(assemble(clean_flags));
    if (*select_cmd) return cmd_select(assemble(select_flags));
    if (*train_cmd) return cmd_train(assemble(train_flags));
    if (*eval_cmd) return cmd_evaluate(assemble(eval_flags));
    if (*compare_cmd) return cmd_compare(assemble(compare_flags));
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.is_input_error() ? kExitInput : kExitInternal;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
