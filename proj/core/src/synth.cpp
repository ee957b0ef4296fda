#include "bayesnid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "bayesnid/csv.hpp"
#include "bayesnid/error.hpp"
#include "bayesnid/preprocess.hpp"

namespace bayesnid {

std::vector<std::string> synth_class_names(std::size_t classes) {
  const auto& base = default_attack_classes();
  std::vector<std::string> names;
  for (std::size_t c = 0; c < classes; ++c) {
    names.push_back(c < base.size() ? base[c] : "class_" + std::to_string(c));
  }
  return names;
}

void write_synthetic_csv(const SynthConfig& config, std::ostream& out) {
  if (config.features == 0) throw Error(ErrorCode::InvalidArgument, "features must be >= 1");
  if (config.classes == 0) throw Error(ErrorCode::InvalidArgument, "classes must be >= 1");
  if (!(config.defect_rate >= 0.0 && config.defect_rate <= 1.0) ||
      !(config.negative_rate >= 0.0 && config.negative_rate <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "defect and negative rates must lie in [0, 1]");
  }
  if (!(config.ordered_fraction >= 0.0 && config.ordered_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "ordered_fraction must lie in [0, 1]");
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const std::size_t d = config.features;
  const std::size_t k = config.classes;
  const auto ordered = static_cast<std::size_t>(std::llround(config.ordered_fraction * static_cast<double>(d)));

  // Per-feature scale spans 1..1000 so magnitudes differ like real flow features.
  std::vector<double> scale(d);
  std::vector<std::vector<double>> class_mean(d, std::vector<double>(k));
  for (std::size_t j = 0; j < d; ++j) {
    scale[j] = std::pow(10.0, 3.0 * unit(rng));
    std::vector<std::size_t> position(k);
    std::iota(position.begin(), position.end(), 0);
    if (j >= ordered) std::shuffle(position.begin(), position.end(), rng);
    const double offset = 4.0 * scale[j];
    for (std::size_t c = 0; c < k; ++c) {
      class_mean[j][c] = offset + config.separation * scale[j] * static_cast<double>(position[c]);
    }
  }

  const auto width = std::max<std::size_t>(2, std::to_string(d - 1).size());
  for (std::size_t j = 0; j < d; ++j) {
    char name[32];
    std::snprintf(name, sizeof name, "feature_%0*zu", static_cast<int>(width), j);
    out << name << ',';
  }
  out << csv_escape(config.label_column) << '\n';

  static constexpr const char* kAbsentTokens[] = {"NaN", "", "Infinity"};
  std::size_t absent_emitted = 0;
  const auto names = synth_class_names(k);
  const std::size_t rows = config.rows_per_class * k;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t c = r % k;
    for (std::size_t j = 0; j < d; ++j) {
      double v = class_mean[j][c] + scale[j] * normal(rng);
      const double u = unit(rng);
      if (u < config.defect_rate) {
        out << kAbsentTokens[absent_emitted++ % std::size(kAbsentTokens)];
      } else {
        if (unit(rng) < config.negative_rate) v = -std::abs(v);
        out << format_double(v);
      }
      out << ',';
    }
    out << csv_escape(names[c]) << '\n';
  }
}

}  // namespace bayesnid
