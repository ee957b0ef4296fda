#include "bayesnid/error.hpp"

namespace bayesnid {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeFeature: return "NegativeFeature";
    case ErrorCode::NonBinaryFeature: return "NonBinaryFeature";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::RaggedRow: return "RaggedRow";
    case ErrorCode::MissingLabelColumn: return "MissingLabelColumn";
    case ErrorCode::UnparseableNumeric: return "UnparseableNumeric";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::KExceedsFeatureCount: return "KExceedsFeatureCount";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IdOutOfRange: return "IdOutOfRange";
    case ErrorCode::EmptyEvaluation: return "EmptyEvaluation";
    case ErrorCode::ManifestMismatch: return "ManifestMismatch";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool Error::is_input_error() const noexcept {
  switch (code_) {
    case ErrorCode::RaggedRow:
    case ErrorCode::MissingLabelColumn:
    case ErrorCode::UnparseableNumeric:
    case ErrorCode::UnknownLabel:
    case ErrorCode::ClassTooSmall:
    case ErrorCode::KExceedsFeatureCount:
    case ErrorCode::MalformedDocument:
    case ErrorCode::VersionMismatch:
    case ErrorCode::InvariantViolation:
    case ErrorCode::ManifestMismatch:
    case ErrorCode::IoFailure:
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyClass:
    case ErrorCode::NegativeFeature:
    case ErrorCode::NonBinaryFeature:
      return true;
    default:
      return false;
  }
}

}  // namespace bayesnid
