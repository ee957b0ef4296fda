#include "bayesnid/matrix.hpp"

#include <algorithm>

#include "bayesnid/dataset.hpp"
#include "bayesnid/error.hpp"

#include <cmath>

namespace bayesnid {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                    std::to_string(rows_ * cols_));
  }
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::DimensionMismatch, "row width " + std::to_string(values.size()) +
                                                  " != " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

std::string_view to_string(TransformTag tag) noexcept {
  switch (tag) {
    case TransformTag::continuous: return "continuous";
    case TransformTag::counts: return "counts";
    case TransformTag::binary: return "binary";
  }
  return "continuous";
}

void CleanDataset::validate() const {
  if (labels.size() != features.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "label count " + std::to_string(labels.size()) +
                                                  " != row count " +
                                                  std::to_string(features.rows()));
  }
  if (column_names.size() != features.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "column name count " +
                                                  std::to_string(column_names.size()) +
                                                  " != feature count " +
                                                  std::to_string(features.cols()));
  }
  for (ClassId label : labels) {
    if (label >= class_names.size()) {
      throw Error(ErrorCode::IdOutOfRange, "label id " + std::to_string(label) +
                                               " outside [0, " +
                                               std::to_string(class_names.size()) + ")");
    }
  }
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      const double v = features(r, c);
      const auto where = " at row " + std::to_string(r) + ", column " + std::to_string(c);
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite value" + where);
      if (transform_tag == TransformTag::counts && v < 0.0) {
        throw Error(ErrorCode::NegativeFeature, "negative count" + where);
      }
      if (transform_tag == TransformTag::binary && v != 0.0 && v != 1.0) {
        throw Error(ErrorCode::NonBinaryFeature, "non-binary value" + where);
      }
    }
  }
}

CleanDataset CleanDataset::subset_rows(std::span<const std::size_t> indices) const {
  CleanDataset out;
  out.class_names = class_names;
  out.transform_tag = transform_tag;
  out.column_names = column_names;
  out.features = Matrix(indices.size(), features.cols());
  out.labels.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = features.row(indices[i]);
    std::copy(src.begin(), src.end(), out.features.row(i).begin());
    out.labels.push_back(labels[indices[i]]);
  }
  return out;
}

CleanDataset CleanDataset::subset_columns(std::span<const std::size_t> indices) const {
  CleanDataset out;
  out.class_names = class_names;
  out.transform_tag = transform_tag;
  out.labels = labels;
  out.features = Matrix(features.rows(), indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= features.cols()) {
      throw Error(ErrorCode::IdOutOfRange, "feature index " + std::to_string(indices[j]));
    }
    out.column_names.push_back(column_names[indices[j]]);
    for (std::size_t r = 0; r < features.rows(); ++r) out.features(r, j) = features(r, indices[j]);
  }
  return out;
}

}  // namespace bayesnid
