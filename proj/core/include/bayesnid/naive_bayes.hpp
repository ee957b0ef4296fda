#pragma once

// Gaussian, Multinomial and Bernoulli naive Bayes over a shared contract.
//
// All scoring happens in log space: a class score is
//   log P(c) + sum_i log P(x_i | c)
// and no product of probabilities is ever formed.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bayesnid/dataset.hpp"
#include "bayesnid/matrix.hpp"

namespace bayesnid {

enum class Variant { gaussian, multinomial, bernoulli };

inline constexpr Variant kAllVariants[] = {Variant::gaussian, Variant::multinomial,
                                           Variant::bernoulli};

std::string_view to_string(Variant v) noexcept;
Variant variant_from_string(std::string_view name);

/// How the binary inputs of a Bernoulli model were produced.
enum class BinarizePolicy { train_median, prebinarized };

std::string_view to_string(BinarizePolicy p) noexcept;
BinarizePolicy binarize_policy_from_string(std::string_view name);

struct FitConfig {
  /// Gaussian variance floor as a fraction of the largest whole-data feature variance.
  double var_epsilon = 1e-9;
  /// Additive smoothing for the multinomial estimator.
  double alpha = 1.0;
  BinarizePolicy binarize_policy = BinarizePolicy::train_median;
};

struct ClassPriors {
  std::vector<double> log_prior;
  std::vector<std::size_t> doc_counts;
  std::size_t total_count = 0;

  std::size_t class_count() const noexcept { return log_prior.size(); }
};

struct GaussianParams {
  Matrix mean;      // class x feature
  Matrix variance;  // class x feature, every entry >= var_floor
  double var_floor = 0.0;
};

struct MultinomialParams {
  Matrix log_cond_prob;  // class x feature, each row exp-sums to 1
  double alpha = 1.0;
};

struct BernoulliParams {
  Matrix cond_prob;  // class x feature, strictly inside (0, 1)
  BinarizePolicy binarize_threshold_policy = BinarizePolicy::train_median;
};

using ModelParams = std::variant<GaussianParams, MultinomialParams, BernoulliParams>;

/// Immutable after fit; safe to share between concurrent readers.
struct TrainedModel {
  Variant variant = Variant::gaussian;
  ClassPriors priors;
  ModelParams params;
  std::size_t feature_count = 0;
  std::vector<std::string> class_names;

  std::size_t class_count() const noexcept { return priors.class_count(); }

  /// Checks every structural and numeric invariant; throws InvariantViolation.
  void validate() const;
};

TrainedModel fit_gaussian(const CleanDataset& data, const FitConfig& config = {});
TrainedModel fit_multinomial(const CleanDataset& data, const FitConfig& config = {});
TrainedModel fit_bernoulli(const CleanDataset& data, const FitConfig& config = {});
TrainedModel fit(Variant variant, const CleanDataset& data, const FitConfig& config = {});

/// log N(x; mean, variance), the per-feature Gaussian term.
double gaussian_log_density(double x, double mean, double variance) noexcept;

/// Per-class log P(c) + sum_i log P(x_i | c).
std::vector<double> joint_log_likelihood(const TrainedModel& model, std::span<const double> row);

/// MAP class; exact ties go to the lowest class id.
ClassId predict(const TrainedModel& model, std::span<const double> row);

std::vector<ClassId> predict_all(const TrainedModel& model, const Matrix& rows);

/// Normalized posterior via max-shifted exponentiation.
std::vector<double> predict_posterior(const TrainedModel& model, std::span<const double> row);

/// Softmax of arbitrary log scores with the max-shift technique.
std::vector<double> softmax(std::span<const double> scores);

/// Index of the largest score, lowest index on ties.
std::size_t argmax(std::span<const double> scores);

}  // namespace bayesnid
