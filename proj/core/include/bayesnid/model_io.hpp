#pragma once

#include <string>
#include <string_view>

#include "bayesnid/naive_bayes.hpp"

namespace bayesnid {

inline constexpr int kModelFormatVersion = 1;

/// Versioned JSON document; doubles are written in shortest round-trip form,
/// so deserialize(serialize(m)) is bit-exact.
std::string serialize_model(const TrainedModel& model);

/// Throws MalformedDocument, VersionMismatch or InvariantViolation.
TrainedModel deserialize_model(std::string_view document);

}  // namespace bayesnid
