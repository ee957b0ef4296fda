#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bayesnid {

enum class ErrorCode {
  // model_core
  EmptyClass,
  NonFinite,
  DimensionMismatch,
  NegativeFeature,
  NonBinaryFeature,
  MalformedDocument,
  VersionMismatch,
  InvariantViolation,
  // preprocess
  RaggedRow,
  MissingLabelColumn,
  UnparseableNumeric,
  UnknownLabel,
  ClassTooSmall,
  // feature_select
  KExceedsFeatureCount,
  // evaluation
  LengthMismatch,
  IdOutOfRange,
  EmptyEvaluation,
  ManifestMismatch,
  // report / io
  InvalidSpec,
  IoFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Input errors map to CLI exit code 2; everything else is internal.
  bool is_input_error() const noexcept;

private:
  ErrorCode code_;
};

}  // namespace bayesnid
