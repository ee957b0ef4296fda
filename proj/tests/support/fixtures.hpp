#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "bayesnid/dataset.hpp"
#include "bayesnid/naive_bayes.hpp"
#include "oracles.hpp"

namespace fixtures {

inline bayesnid::CleanDataset make_dataset(const std::vector<std::vector<double>>& rows,
                                           const std::vector<std::size_t>& labels,
                                           std::vector<std::string> class_names,
                                           bayesnid::TransformTag tag = bayesnid::TransformTag::continuous) {
  bayesnid::CleanDataset d;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  d.features = bayesnid::Matrix(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) d.features(r, c) = rows[r][c];
  }
  d.labels = labels;
  d.class_names = std::move(class_names);
  d.transform_tag = tag;
  for (std::size_t c = 0; c < cols; ++c) d.column_names.push_back("f" + std::to_string(c));
  return d;
}

inline std::vector<std::string> class_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < k; ++c) names.push_back("c" + std::to_string(c));
  return names;
}

inline bayesnid::CleanDataset to_dataset(const oracle::Instance& inst, bayesnid::TransformTag tag) {
  return make_dataset(inst.rows, inst.labels, class_names(inst.classes), tag);
}

/// Random tiny instance: n <= 20, d <= 4, classes <= 3, every class populated.
/// Gaussian instances keep every per-class variance >= 0.1 so scores stay moderate.
inline oracle::Instance random_instance(std::mt19937_64& rng, bayesnid::Variant variant) {
  std::uniform_int_distribution<std::size_t> pick_k(1, 3);
  std::uniform_int_distribution<std::size_t> pick_d(1, 4);
  for (;;) {
    oracle::Instance inst;
    inst.classes = pick_k(rng);
    const std::size_t d = pick_d(rng);
    const std::size_t min_per_class = variant == bayesnid::Variant::gaussian ? 2 : 1;
    std::uniform_int_distribution<std::size_t> pick_n(min_per_class * inst.classes, 20);
    const std::size_t n = pick_n(rng);
    std::uniform_int_distribution<std::size_t> pick_class(0, inst.classes - 1);
    for (std::size_t r = 0; r < n; ++r) {
      inst.labels.push_back(r < min_per_class * inst.classes ? r % inst.classes : pick_class(rng));
    }
    std::uniform_real_distribution<double> real(-5.0, 5.0);
    std::uniform_int_distribution<int> count(0, 5);
    std::uniform_int_distribution<int> bit(0, 1);
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<double> row(d);
      for (auto& v : row) {
        switch (variant) {
          case bayesnid::Variant::gaussian: v = real(rng); break;
          case bayesnid::Variant::multinomial: v = count(rng); break;
          case bayesnid::Variant::bernoulli: v = bit(rng); break;
        }
      }
      inst.rows.push_back(std::move(row));
    }
    if (variant != bayesnid::Variant::gaussian) return inst;

    bool spread = true;
    for (std::size_t c = 0; c < inst.classes && spread; ++c) {
      const auto members = oracle::class_rows(inst, c);
      for (std::size_t i = 0; i < d && spread; ++i) {
        double m = 0.0;
        for (auto r : members) m += inst.rows[r][i];
        m /= static_cast<double>(members.size());
        double v = 0.0;
        for (auto r : members) v += (inst.rows[r][i] - m) * (inst.rows[r][i] - m);
        spread = v / static_cast<double>(members.size()) >= 0.1;
      }
    }
    if (spread) return inst;
  }
}

inline std::vector<double> random_query(std::mt19937_64& rng, bayesnid::Variant variant, std::size_t d) {
  std::uniform_real_distribution<double> real(-6.0, 6.0);
  std::uniform_int_distribution<int> count(0, 5);
  std::uniform_int_distribution<int> bit(0, 1);
  std::vector<double> row(d);
  for (auto& v : row) {
    switch (variant) {
      case bayesnid::Variant::gaussian: v = real(rng); break;
      case bayesnid::Variant::multinomial: v = count(rng); break;
      case bayesnid::Variant::bernoulli: v = bit(rng); break;
    }
  }
  return row;
}

inline std::vector<long double> oracle_scores(const oracle::Instance& inst, bayesnid::Variant variant,
                                              const std::vector<double>& x) {
  switch (variant) {
    case bayesnid::Variant::gaussian: return oracle::gaussian_scores(inst, x);
    case bayesnid::Variant::multinomial: return oracle::multinomial_scores(inst, x);
    case bayesnid::Variant::bernoulli: return oracle::bernoulli_scores(inst, x);
  }
  return {};
}

inline bayesnid::TransformTag tag_for(bayesnid::Variant v) {
  switch (v) {
    case bayesnid::Variant::gaussian: return bayesnid::TransformTag::continuous;
    case bayesnid::Variant::multinomial: return bayesnid::TransformTag::counts;
    case bayesnid::Variant::bernoulli: return bayesnid::TransformTag::binary;
  }
  return bayesnid::TransformTag::continuous;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() /
              ("bayesnid_" + name + "_" + std::to_string(std::random_device{}()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

}  // namespace fixtures
