#include "bayesnid/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "bayesnid/error.hpp"

namespace bayesnid {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;  // log(2*pi)

void check_config(const FitConfig& config) {
  if (!(config.var_epsilon > 0.0) || !std::isfinite(config.var_epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "var_epsilon must be a positive finite number");
  }
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be a positive finite number");
  }
}

// Shared preconditions of every fit: consistent shapes, finite values and at
// least one row for every class id in range.
void check_fit_input(const CleanDataset& data) {
  if (data.feature_count() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "dataset has no feature columns");
  }
  if (data.class_count() == 0) {
    throw Error(ErrorCode::EmptyClass, "dataset declares no classes");
  }
  if (data.labels.size() != data.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "label count differs from row count");
  }
  if (data.column_names.size() != data.feature_count()) {
    throw Error(ErrorCode::DimensionMismatch, "column name count differs from feature count");
  }
  for (ClassId label : data.labels) {
    if (label >= data.class_count()) {
      throw Error(ErrorCode::IdOutOfRange, "label id " + std::to_string(label) + " out of range");
    }
  }
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (double v : data.features.row(r)) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFinite, "non-finite feature value in row " + std::to_string(r));
      }
    }
  }
}

ClassPriors estimate_priors(const CleanDataset& data) {
  ClassPriors priors;
  priors.doc_counts.assign(data.class_count(), 0);
  for (ClassId label : data.labels) ++priors.doc_counts[label];
  priors.total_count = data.rows();
  for (std::size_t c = 0; c < priors.doc_counts.size(); ++c) {
    if (priors.doc_counts[c] == 0) {
      throw Error(ErrorCode::EmptyClass, "class '" + data.class_names[c] + "' has no rows");
    }
  }
  priors.log_prior.reserve(priors.doc_counts.size());
  for (std::size_t n_c : priors.doc_counts) {
    priors.log_prior.push_back(
        std::log(static_cast<double>(n_c) / static_cast<double>(priors.total_count)));
  }
  return priors;
}

TrainedModel make_model(Variant variant, const CleanDataset& data, ClassPriors priors,
                        ModelParams params) {
  TrainedModel model;
  model.variant = variant;
  model.priors = std::move(priors);
  model.params = std::move(params);
  model.feature_count = data.feature_count();
  model.class_names = data.class_names;
  return model;
}

void check_row(const TrainedModel& model, std::span<const double> row) {
  if (row.size() != model.feature_count) {
    throw Error(ErrorCode::DimensionMismatch, "row has " + std::to_string(row.size()) +
                                                  " features, model expects " +
                                                  std::to_string(model.feature_count));
  }
  for (double v : row) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite feature value");
  }
}

[[noreturn]] void invariant(const std::string& what) {
  throw Error(ErrorCode::InvariantViolation, what);
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::gaussian: return "gaussian";
    case Variant::multinomial: return "multinomial";
    case Variant::bernoulli: return "bernoulli";
  }
  return "gaussian";
}

Variant variant_from_string(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  throw Error(ErrorCode::MalformedDocument, "unknown variant '" + std::string(name) + "'");
}

std::string_view to_string(BinarizePolicy p) noexcept {
  return p == BinarizePolicy::train_median ? "train_median" : "prebinarized";
}

BinarizePolicy binarize_policy_from_string(std::string_view name) {
  if (name == "train_median") return BinarizePolicy::train_median;
  if (name == "prebinarized") return BinarizePolicy::prebinarized;
  throw Error(ErrorCode::MalformedDocument, "unknown binarize policy '" + std::string(name) + "'");
}

TrainedModel fit_gaussian(const CleanDataset& data, const FitConfig& config) {
  check_config(config);
  check_fit_input(data);
  ClassPriors priors = estimate_priors(data);

  const std::size_t k = data.class_count();
  const std::size_t d = data.feature_count();
  const std::size_t n = data.rows();

  GaussianParams params;
  params.mean = Matrix(k, d);
  params.variance = Matrix(k, d);

  for (std::size_t r = 0; r < n; ++r) {
    const auto row = data.features.row(r);
    auto mean_row = params.mean.row(data.labels[r]);
    for (std::size_t i = 0; i < d; ++i) mean_row[i] += row[i];
  }
  for (std::size_t c = 0; c < k; ++c) {
    const double n_c = static_cast<double>(priors.doc_counts[c]);
    for (double& m : params.mean.row(c)) m /= n_c;
  }

  // Two-pass population variance, per class and over the whole data.
  std::vector<double> total_mean(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = data.features.row(r);
    for (std::size_t i = 0; i < d; ++i) total_mean[i] += row[i];
  }
  for (double& m : total_mean) m /= static_cast<double>(n);

  std::vector<double> total_var(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = data.features.row(r);
    const auto mean_row = params.mean.row(data.labels[r]);
    auto var_row = params.variance.row(data.labels[r]);
    for (std::size_t i = 0; i < d; ++i) {
      const double dev = row[i] - mean_row[i];
      var_row[i] += dev * dev;
      const double total_dev = row[i] - total_mean[i];
      total_var[i] += total_dev * total_dev;
    }
  }
  double max_var = 0.0;
  for (double v : total_var) max_var = std::max(max_var, v / static_cast<double>(n));

  // All-constant data has no scale to borrow; fall back to the bare epsilon.
  params.var_floor = config.var_epsilon * (max_var > 0.0 ? max_var : 1.0);

  for (std::size_t c = 0; c < k; ++c) {
    const double n_c = static_cast<double>(priors.doc_counts[c]);
    for (double& v : params.variance.row(c)) v = v / n_c + params.var_floor;
  }

  return make_model(Variant::gaussian, data, std::move(priors), std::move(params));
}

TrainedModel fit_multinomial(const CleanDataset& data, const FitConfig& config) {
  check_config(config);
  check_fit_input(data);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (double v : data.features.row(r)) {
      if (v < 0.0) {
        throw Error(ErrorCode::NegativeFeature,
                    "multinomial input must be non-negative (row " + std::to_string(r) + ")");
      }
    }
  }
  ClassPriors priors = estimate_priors(data);

  const std::size_t k = data.class_count();
  const std::size_t d = data.feature_count();

  Matrix feature_sums(k, d);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.features.row(r);
    auto sums = feature_sums.row(data.labels[r]);
    for (std::size_t i = 0; i < d; ++i) sums[i] += row[i];
  }

  MultinomialParams params;
  params.alpha = config.alpha;
  params.log_cond_prob = Matrix(k, d);
  const double smoothing_mass = config.alpha * static_cast<double>(d);
  for (std::size_t c = 0; c < k; ++c) {
    const auto sums = feature_sums.row(c);
    const double class_total = std::accumulate(sums.begin(), sums.end(), 0.0);
    auto out = params.log_cond_prob.row(c);
    for (std::size_t i = 0; i < d; ++i) {
      out[i] = std::log((sums[i] + config.alpha) / (class_total + smoothing_mass));
    }
  }

  return make_model(Variant::multinomial, data, std::move(priors), std::move(params));
}

TrainedModel fit_bernoulli(const CleanDataset& data, const FitConfig& config) {
  check_config(config);
  check_fit_input(data);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (double v : data.features.row(r)) {
      if (v != 0.0 && v != 1.0) {
        throw Error(ErrorCode::NonBinaryFeature,
                    "bernoulli input must be 0 or 1 (row " + std::to_string(r) + ")");
      }
    }
  }
  ClassPriors priors = estimate_priors(data);

  const std::size_t k = data.class_count();
  const std::size_t d = data.feature_count();

  // N_ct: rows of class c with feature t present.
  Matrix present(k, d);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.features.row(r);
    auto counts = present.row(data.labels[r]);
    for (std::size_t t = 0; t < d; ++t) counts[t] += row[t];
  }

  BernoulliParams params;
  params.binarize_threshold_policy = config.binarize_policy;
  params.cond_prob = Matrix(k, d);
  for (std::size_t c = 0; c < k; ++c) {
    const double n_c = static_cast<double>(priors.doc_counts[c]);
    for (std::size_t t = 0; t < d; ++t) {
      params.cond_prob(c, t) = (present(c, t) + 1.0) / (n_c + 2.0);
    }
  }

  return make_model(Variant::bernoulli, data, std::move(priors), std::move(params));
}

TrainedModel fit(Variant variant, const CleanDataset& data, const FitConfig& config) {
  switch (variant) {
    case Variant::gaussian: return fit_gaussian(data, config);
    case Variant::multinomial: return fit_multinomial(data, config);
    case Variant::bernoulli: return fit_bernoulli(data, config);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown variant");
}

double gaussian_log_density(double x, double mean, double variance) noexcept {
  const double dev = x - mean;
  return -0.5 * (kLogTwoPi + std::log(variance)) - dev * dev / (2.0 * variance);
}

namespace {

// Per-model log terms that do not depend on the row, cached so batch
// prediction pays for each log once. Every score is formed with the same
// operations as the single-row path, so results are bit-identical.
class Scorer {
public:
  explicit Scorer(const TrainedModel& model) : model_(model) {
    const std::size_t k = model.class_count();
    const std::size_t d = model.feature_count;
    if (const auto* g = std::get_if<GaussianParams>(&model.params)) {
      first_ = Matrix(k, d);
      second_ = Matrix(k, d);
      for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < d; ++i) {
          first_(c, i) = -0.5 * (kLogTwoPi + std::log(g->variance(c, i)));
          second_(c, i) = 2.0 * g->variance(c, i);
        }
      }
    } else if (const auto* b = std::get_if<BernoulliParams>(&model.params)) {
      first_ = Matrix(k, d);
      second_ = Matrix(k, d);
      for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t t = 0; t < d; ++t) {
          first_(c, t) = std::log(b->cond_prob(c, t));
          second_(c, t) = std::log1p(-b->cond_prob(c, t));
        }
      }
    }
  }

  std::vector<double> scores(std::span<const double> row) const {
    check_row(model_, row);
    std::vector<double> scores = model_.priors.log_prior;
    const std::size_t d = model_.feature_count;

    if (const auto* g = std::get_if<GaussianParams>(&model_.params)) {
      for (std::size_t c = 0; c < scores.size(); ++c) {
        const auto mean = g->mean.row(c);
        const auto norm = first_.row(c);
        const auto two_var = second_.row(c);
        double sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          const double dev = row[i] - mean[i];
          sum += norm[i] - dev * dev / two_var[i];
        }
        scores[c] += sum;
      }
    } else if (const auto* m = std::get_if<MultinomialParams>(&model_.params)) {
      for (double v : row) {
        if (v < 0.0) throw Error(ErrorCode::NegativeFeature, "multinomial input must be non-negative");
      }
      for (std::size_t c = 0; c < scores.size(); ++c) {
        const auto log_p = m->log_cond_prob.row(c);
        double sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          if (row[i] != 0.0) sum += row[i] * log_p[i];
        }
        scores[c] += sum;
      }
    } else {
      for (double v : row) {
        if (v != 0.0 && v != 1.0) {
          throw Error(ErrorCode::NonBinaryFeature, "bernoulli input must be 0 or 1");
        }
      }
      for (std::size_t c = 0; c < scores.size(); ++c) {
        const auto log_p = first_.row(c);
        const auto log_q = second_.row(c);
        double sum = 0.0;
        // Absent features contribute log(1 - p) rather than being skipped.
        for (std::size_t t = 0; t < d; ++t) sum += row[t] == 1.0 ? log_p[t] : log_q[t];
        scores[c] += sum;
      }
    }
    return scores;
  }

private:
  const TrainedModel& model_;
  Matrix first_;   // gaussian: -0.5 (log 2pi + log var); bernoulli: log p
  Matrix second_;  // gaussian: 2 var; bernoulli: log(1 - p)
};

}  // namespace

std::vector<double> joint_log_likelihood(const TrainedModel& model, std::span<const double> row) {
  return Scorer(model).scores(row);
}

std::size_t argmax(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorCode::InvalidArgument, "argmax of empty score vector");
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return best;
}

ClassId predict(const TrainedModel& model, std::span<const double> row) {
  return argmax(joint_log_likelihood(model, row));
}

std::vector<ClassId> predict_all(const TrainedModel& model, const Matrix& rows) {
  std::vector<ClassId> out;
  out.reserve(rows.rows());
  const Scorer scorer(model);
  for (std::size_t r = 0; r < rows.rows(); ++r) out.push_back(argmax(scorer.scores(rows.row(r))));
  return out;
}

std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) return {};
  const double peak = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    out[c] = std::exp(scores[c] - peak);
    sum += out[c];
  }
  for (double& p : out) p /= sum;
  return out;
}

std::vector<double> predict_posterior(const TrainedModel& model, std::span<const double> row) {
  return softmax(joint_log_likelihood(model, row));
}

void TrainedModel::validate() const {
  const std::size_t k = priors.log_prior.size();
  if (k == 0) invariant("model has no classes");
  if (feature_count == 0) invariant("model has no features");
  if (class_names.size() != k) {
    invariant("class_names has " + std::to_string(class_names.size()) + " entries, expected " +
              std::to_string(k));
  }
  if (priors.doc_counts.size() != k) invariant("doc_counts length differs from class count");
  std::size_t total = 0;
  for (std::size_t n_c : priors.doc_counts) {
    if (n_c == 0) invariant("doc_counts entry is zero");
    total += n_c;
  }
  if (total != priors.total_count) invariant("doc_counts do not sum to total_count");
  double prior_mass = 0.0;
  for (double lp : priors.log_prior) {
    if (!std::isfinite(lp)) invariant("log_prior entry is not finite");
    prior_mass += std::exp(lp);
  }
  if (std::abs(prior_mass - 1.0) > 1e-12) invariant("priors do not sum to 1");

  const auto check_shape = [&](const Matrix& m, const char* name) {
    if (m.rows() != k || m.cols() != feature_count) {
      invariant(std::string(name) + " is " + std::to_string(m.rows()) + "x" +
                std::to_string(m.cols()) + ", expected " + std::to_string(k) + "x" +
                std::to_string(feature_count));
    }
  };

  switch (variant) {
    case Variant::gaussian: {
      const auto* g = std::get_if<GaussianParams>(&params);
      if (g == nullptr) invariant("params do not match variant 'gaussian'");
      check_shape(g->mean, "mean");
      check_shape(g->variance, "variance");
      if (!(g->var_floor > 0.0) || !std::isfinite(g->var_floor)) invariant("var_floor must be > 0");
      for (double m : g->mean.data()) {
        if (!std::isfinite(m)) invariant("mean entry is not finite");
      }
      for (double v : g->variance.data()) {
        if (!std::isfinite(v) || v < g->var_floor) invariant("variance below var_floor");
      }
      break;
    }
    case Variant::multinomial: {
      const auto* m = std::get_if<MultinomialParams>(&params);
      if (m == nullptr) invariant("params do not match variant 'multinomial'");
      check_shape(m->log_cond_prob, "log_cond_prob");
      if (!(m->alpha > 0.0)) invariant("alpha must be > 0");
      for (std::size_t c = 0; c < k; ++c) {
        double mass = 0.0;
        for (double lp : m->log_cond_prob.row(c)) {
          if (!std::isfinite(lp) || lp > 0.0) invariant("log_cond_prob entry outside (-inf, 0]");
          mass += std::exp(lp);
        }
        if (std::abs(mass - 1.0) > 1e-9) invariant("log_cond_prob row does not sum to 1");
      }
      break;
    }
    case Variant::bernoulli: {
      const auto* b = std::get_if<BernoulliParams>(&params);
      if (b == nullptr) invariant("params do not match variant 'bernoulli'");
      check_shape(b->cond_prob, "cond_prob");
      for (double p : b->cond_prob.data()) {
        if (!(p > 0.0 && p < 1.0)) invariant("cond_prob entry outside (0, 1)");
      }
      break;
    }
  }
}

}  // namespace bayesnid
