#pragma once

// Side-by-side comparison of the analytic model with testbench and
// full-system runs of a 1024-sample convolution.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rvdsp/scenario.hpp"

namespace rvdsp {

struct Table3Check {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct Table3Report {
  std::uint32_t n = 1024;
  std::uint32_t k = 16;
  double frequency_hz = 100e6;

  std::uint64_t sw_cycles = 0;
  std::uint64_t busy_model = 0;
  std::uint64_t dsp_cycles = 0;
  double speedup = 0;
  double sw_latency_s = 0;
  double dsp_latency_s = 0;

  ScenarioResult testbench;
  ScenarioResult full_system;

  std::vector<Table3Check> checks;
  bool mismatch() const noexcept;
};

/// Expected speedup band for a kernel length, when one is known.
struct SpeedupExpectation {
  double lo;
  double hi;
  const char* label;
};
std::optional<SpeedupExpectation> expected_speedup(std::uint32_t k);

Table3Report run_table3(std::uint32_t k = 16, double frequency_hz = 100e6, std::uint64_t seed = 7);
std::string format_table3(const Table3Report& r);
std::string table3_json(const Table3Report& r, int indent = 2);

}  // namespace rvdsp
