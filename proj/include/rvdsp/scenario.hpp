#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rvdsp/kvfile.hpp"
#include "rvdsp/perf_model.hpp"
#include "rvdsp/soc.hpp"

namespace rvdsp {

enum class ScenarioMode : std::uint8_t { Testbench, FullSystem };
enum class ScenarioKind : std::uint8_t { Conv, Dot, CnnLayer, DenseLayer };
enum class Placement : std::uint8_t { Default, Packed };

std::string_view to_string(ScenarioMode m);
std::string_view to_string(ScenarioKind k);
std::string_view to_string(Placement p);

/// Malformed scenario or configuration text (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed scenario that cannot be run as described (exit code 3).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named DataMem buffer.
struct Buffer {
  std::string name;
  Address addr = 0;
  std::uint64_t words = 0;

  Address end() const noexcept { return addr + static_cast<Address>(4 * words); }
};

struct Scenario {
  std::string name = "scenario";
  ScenarioMode mode = ScenarioMode::Testbench;
  ScenarioKind kind = ScenarioKind::Conv;
  std::optional<Placement> placement;  // unset: Default for conv/dot, Packed for layers
  std::uint64_t seed = 1;
  bool int_en = false;

  // conv: N, K; dot: L; layers use the shapes below.
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint32_t len = 0;
  perf::CnnLayerShape cnn;
  perf::DenseLayerShape dense;

  // Explicit buffer addresses (conv: x/h/y, dot: a/b); unset uses placement.
  std::optional<Address> x_addr, h_addr, y_addr, a_addr, b_addr;

  // Explicit data; empty vectors mean seeded random.
  std::vector<std::int32_t> x, h, a, b;

  SimConfig sim;
};

/// Parses scenario text. `base_dir` resolves relative `*_file` paths.
/// Throws ConfigError.
Scenario parse_scenario(const std::string& text, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

/// Buffers in DataMem order of declaration. Throws ScenarioError on any
/// size, range, overlap or capacity problem.
std::vector<Buffer> plan_buffers(const Scenario& s);
void validate(const Scenario& s);

struct ModelFigures {
  std::uint64_t sw_cycles = 0;
  std::uint64_t dsp_cycles = 0;   // busy + flat configuration cost
  std::uint64_t busy_cycles = 0;  // accelerator-only
  std::uint64_t macs = 0;
  double speedup = 0;
  double sw_latency_s = 0;
  double dsp_latency_s = 0;
  // Per-MAC approximations for layer workloads and dot products.
  std::optional<std::uint64_t> sw_cycles_rounded;
  std::optional<std::uint64_t> dsp_cycles_rounded;
};

ModelFigures model_for(const Scenario& s);

struct ScenarioResult {
  Scenario scenario;
  std::vector<Buffer> buffers;
  CycleReport report;
  StopReason stop = StopReason::Halted;
  bool timed_out = false;
  bool dsp_error = false;
  std::uint64_t calls = 0;

  std::uint64_t busy_cycles = 0;           // accelerator busy cycles, summed over calls
  std::uint64_t expected_busy_cycles = 0;  // uncontended formula, summed over calls
  std::uint64_t mac_count = 0;
  std::uint64_t expected_macs = 0;
  std::uint64_t config_write_cycles = 0;   // measured, summed over calls

  std::vector<Word> output;     // y (conv, cnn, dense) in DataMem order
  std::vector<Word> reference;  // oracle for `output`
  std::optional<std::int64_t> dot_result;
  std::optional<std::int64_t> dot_reference;
  std::uint64_t mismatches = 0;

  ModelFigures model;
  std::vector<Word> sram;  // final DataMem image
  std::uint64_t rom_digest_before = 0;
  std::uint64_t rom_digest_after = 0;

  bool outputs_match() const noexcept;
};

/// Builds a system, stages data and runs the scenario to completion.
/// Throws ScenarioError for invalid scenarios; simulation faults and
/// timeouts are reported in the result.
ScenarioResult run_scenario(const Scenario& s, TraceSink* trace = nullptr);

/// Generated data for a scenario, in the documented draw order.
struct ScenarioData {
  std::vector<std::int32_t> x, h;  // conv
  std::vector<std::int32_t> a, b;  // dot
  std::vector<std::vector<std::int32_t>> inputs;  // cnn: [c][i]
  std::vector<std::vector<std::vector<std::int32_t>>> weights;  // cnn: [k][c][j]
  std::vector<std::vector<std::int32_t>> dense_w;  // [out][in]
  std::vector<std::int32_t> dense_x;
};

ScenarioData make_data(const Scenario& s);

}  // namespace rvdsp
