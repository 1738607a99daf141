#pragma once

#include <string>

#include <json.hpp>

#include "shiftlab/stability_lab.hpp"

namespace shiftlab {

inline constexpr const char* report_schema = "shiftlab-report-v1";

/// Compact JSON with keys sorted, doubles printed as %.17g and non-finite
/// doubles written as null.  Same value, same bytes.
std::string canonical_dump(const nlohmann::json& value);

/// {"schema", "experiment", "inputs", "per_step", "fitted_slope", "verdict", "summary"}.
nlohmann::json report_document(const ExperimentReport& report);

/// Header "epsilon" followed by the sorted union of metric names; one row
/// per step.  Missing or non-finite values are written as "nan".
std::string steps_csv(const ExperimentReport& report);

/// Writes text to path, throwing Error when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace shiftlab
