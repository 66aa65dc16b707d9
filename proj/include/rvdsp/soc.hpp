#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rvdsp/bus.hpp"
#include "rvdsp/conv1d.hpp"
#include "rvdsp/cpu.hpp"
#include "rvdsp/dotprod.hpp"
#include "rvdsp/mac.hpp"
#include "rvdsp/mem_map.hpp"
#include "rvdsp/trace.hpp"

namespace rvdsp {

struct SimConfig {
  CycleCostTable costs;
  TruncationPolicy truncation = TruncationPolicy::Wrap;
  std::uint64_t max_cycles = 50'000'000;
  TraceLevel trace_level = TraceLevel::Off;
  double frequency_hz = 100e6;

  /// Throws std::invalid_argument for max_cycles == 0 or a non-positive frequency.
  void validate() const;
};

class SimulationTimeout : public std::runtime_error {
 public:
  explicit SimulationTimeout(std::uint64_t cycles)
      : std::runtime_error("simulation exceeded " + std::to_string(cycles) + " cycles"),
        cycles_(cycles) {}
  std::uint64_t cycles() const noexcept { return cycles_; }

 private:
  std::uint64_t cycles_;
};

/// Host access through the bus came back with an error response.
class HostAccessError : public std::runtime_error {
 public:
  HostAccessError(Address addr, BusError error);
  Address address() const noexcept { return addr_; }
  BusError error() const noexcept { return error_; }

 private:
  Address addr_;
  BusError error_;
};

struct RequesterReport {
  std::uint64_t posted = 0;
  std::uint64_t grants = 0;
  std::uint64_t completions = 0;
  std::uint64_t stalls = 0;
  std::uint64_t register_accesses = 0;
  std::uint64_t errors = 0;
};

struct DspReport {
  DspCounters counters;
  bool irq = false;
  Word status = 0;
  std::string state;
  std::string fault;
};

struct CpuReport {
  bool enabled = false;
  bool halted = false;
  std::uint64_t retired = 0;
  std::uint64_t cycles = 0;
  std::uint64_t memory_wait_cycles = 0;
  std::array<std::uint64_t, kCostClassCount> class_counts{};
  std::optional<Fault> fault;
};

struct CycleReport {
  std::uint64_t total_cycles = 0;
  std::array<RequesterReport, kRequesterCount> bus{};
  CpuReport cpu;
  DspReport conv;
  DspReport dot;
  std::uint64_t reserved_writes = 0;
  std::uint64_t sram_accesses = 0;
};

enum class StopReason : std::uint8_t { Halted, Faulted, Timeout };
std::string_view to_string(StopReason r);

/// The whole system: ROM, SRAM, interconnect, CPU and both accelerators,
/// advanced one global cycle at a time.
///
/// Per cycle: the CPU (or the testbench host in its place) posts, the DSPs
/// post, the bus resolves, then the CPU and DSPs observe the responses.
class Soc {
 public:
  explicit Soc(const SimConfig& cfg = {});
  Soc(const Soc&) = delete;
  Soc& operator=(const Soc&) = delete;

  const SimConfig& config() const noexcept { return cfg_; }

  Rom& rom() noexcept { return rom_; }
  Sram& sram() noexcept { return sram_; }
  const Rom& rom() const noexcept { return rom_; }
  const Sram& sram() const noexcept { return sram_; }
  Conv1dAccelerator& conv() noexcept { return conv_; }
  DotProductAccelerator& dot() noexcept { return dot_; }
  const Conv1dAccelerator& conv() const noexcept { return conv_; }
  const DotProductAccelerator& dot() const noexcept { return dot_; }
  Cpu& cpu() noexcept { return cpu_; }
  const Cpu& cpu() const noexcept { return cpu_; }
  const Bus& bus() const noexcept { return bus_; }

  void set_trace(TraceSink* sink);

  void load_program(std::span<const Word> words, Address at = map::kInstBase);
  /// Backdoor SRAM access; takes no simulated time.
  void write_data(Address at, std::span<const Word> words);
  void write_data(Address at, std::span<const std::int32_t> values);
  std::vector<Word> read_data(Address at, std::size_t count) const;

  /// Hands the CPU-side bus port to the core, starting at `entry`.
  void enable_cpu(Address entry = map::kInstBase);
  bool cpu_enabled() const noexcept { return cpu_enabled_; }

  std::uint64_t cycle() const noexcept { return cycle_; }
  void step();

  /// Steps until the CPU halts or faults, or max_cycles is reached.
  StopReason run();

  /// Testbench host transactions through the CPU port (CPU disabled). Each
  /// steps the system until the transaction completes. Throw HostAccessError
  /// on an error response and SimulationTimeout past max_cycles.
  Word host_read(Address addr);
  void host_write(Address addr, Word value);
  /// Reads `status_addr` once per cycle until any bit of `mask` is set;
  /// returns the final value.
  Word host_poll(Address status_addr, Word mask);
  /// Steps without bus activity from the host.
  void idle(std::uint64_t cycles);

  CycleReport report() const;

 private:
  Word host_access(Address addr, bool write, Word value);
  void check_timeout() const;

  SimConfig cfg_;
  Rom rom_;
  Sram sram_;
  Conv1dAccelerator conv_;
  DotProductAccelerator dot_;
  Bus bus_;
  Cpu cpu_;
  MmiPort cpu_port_;
  MmiPort host_port_;
  MmiPort conv_port_;
  MmiPort dot_port_;
  bool cpu_enabled_ = false;
  bool conv_irq_ = false;
  bool dot_irq_ = false;
  std::uint64_t cycle_ = 0;
  TraceSink* trace_ = nullptr;
};

}  // namespace rvdsp
