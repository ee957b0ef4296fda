#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bayesnid/matrix.hpp"

namespace bayesnid {

using ClassId = std::size_t;

/// Which variant-specific transform produced the feature values.
enum class TransformTag { continuous, counts, binary };

std::string_view to_string(TransformTag tag) noexcept;

/// Numeric feature matrix with integer class labels, post-imputation.
///
/// Invariants (checked by validate()): every value finite; labels in
/// [0, class_names.size()); counts => values >= 0; binary => values in {0, 1};
/// column_names.size() == features.cols(); labels.size() == features.rows().
struct CleanDataset {
  Matrix features;
  std::vector<ClassId> labels;
  std::vector<std::string> class_names;
  TransformTag transform_tag = TransformTag::continuous;
  std::vector<std::string> column_names;

  std::size_t rows() const noexcept { return features.rows(); }
  std::size_t feature_count() const noexcept { return features.cols(); }
  std::size_t class_count() const noexcept { return class_names.size(); }

  /// Throws Error with the violated invariant's code.
  void validate() const;

  CleanDataset subset_rows(std::span<const std::size_t> indices) const;
  CleanDataset subset_columns(std::span<const std::size_t> indices) const;
};

}  // namespace bayesnid
