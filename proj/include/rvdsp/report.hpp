#pragma once

#include <string>

#include "rvdsp/scenario.hpp"

namespace rvdsp {

/// Version tag written as the "schema" key of every report.
inline constexpr const char* kReportSchema = "rvdsp.report/1";

std::string cycle_report_json(const CycleReport& r, int indent = 2);
std::string scenario_report_json(const ScenarioResult& r, int indent = 2);

}  // namespace rvdsp
