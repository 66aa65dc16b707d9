#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "rvdsp/bus.hpp"
#include "rvdsp/isa.hpp"
#include "rvdsp/mem_map.hpp"
#include "rvdsp/trace.hpp"

namespace rvdsp {

/// Cycles charged per cost class. Fetch is folded into these figures.
class CycleCostTable {
 public:
  CycleCostTable() = default;

  std::uint32_t operator[](CostClass c) const noexcept { return cycles_[idx(c)]; }
  void set(CostClass c, std::uint32_t cycles);

  friend bool operator==(const CycleCostTable&, const CycleCostTable&) = default;

 private:
  static constexpr std::size_t idx(CostClass c) noexcept { return static_cast<std::size_t>(c); }

  // Alu, Mul, Load, Store, BranchNotTaken, BranchTaken, Jump, System
  std::array<std::uint32_t, kCostClassCount> cycles_{1, 1, 3, 3, 1, 2, 2, 1};
};

class RegisterFile {
 public:
  Word read(std::uint8_t r) const noexcept { return x_[r & 31]; }
  void write(std::uint8_t r, Word v) noexcept {
    if ((r & 31) != 0) x_[r & 31] = v;
  }
  const std::array<Word, 32>& raw() const noexcept { return x_; }

  Address pc = 0;

  friend bool operator==(const RegisterFile&, const RegisterFile&) = default;

 private:
  std::array<Word, 32> x_{};
};

enum class FaultKind : std::uint8_t {
  IllegalInstruction,
  FetchFault,   // pc outside InstMem or not word aligned
  Misaligned,   // halfword at an odd address or word not 4-byte aligned
  LoadFault,    // bus error on a load
  StoreFault,   // bus error on a store
};

std::string_view to_string(FaultKind k);

struct Fault {
  FaultKind kind = FaultKind::IllegalInstruction;
  Address pc = 0;
  Word word = 0;     // instruction word at pc (0 for fetch faults)
  Address addr = 0;  // effective address of the failing access
  std::string cause;
};

struct CpuState {
  RegisterFile regs;
  bool halted = false;
  std::optional<Fault> fault;
  std::uint64_t retired = 0;
  std::uint64_t cycles = 0;
  std::uint64_t memory_wait_cycles = 0;  // cycles past the cost table spent waiting on the bus
  std::array<std::uint64_t, kCostClassCount> class_counts{};
};

/// In-order RV32IM core. One instruction is in flight at a time: it begins
/// in `post`, may issue one bus transaction, and retires in the `observe`
/// of the cycle where both its cost has elapsed and its transaction is done.
class Cpu {
 public:
  explicit Cpu(const Rom& rom, CycleCostTable costs = {}) : rom_(rom), costs_(costs) {}

  void reset(Address entry = map::kInstBase);

  void post(std::uint64_t cycle, MmiPort& port);
  void observe(std::uint64_t cycle, const MmiPort& port);

  bool running() const noexcept { return !state_.halted && !state_.fault; }
  bool idle_between_instructions() const noexcept { return !cur_; }

  const CpuState& state() const noexcept { return state_; }
  RegisterFile& regs() noexcept { return state_.regs; }
  const CycleCostTable& costs() const noexcept { return costs_; }

  void set_trace(TraceSink* sink) noexcept { trace_ = sink; }

 private:
  enum class Width : std::uint8_t { Byte, Half, Full };

  struct InFlight {
    Instruction in;
    Word word = 0;
    Address pc = 0;
    Address next_pc = 0;
    CostClass cost_class = CostClass::Alu;
    std::uint32_t cost = 1;
    std::uint32_t elapsed = 0;

    bool mem = false;
    bool write = false;
    bool is_signed = false;
    Width width = Width::Full;
    Address addr = 0;       // effective byte address
    Address bus_addr = 0;   // word address presented on the bus
    Word wdata = 0;
    std::uint8_t mask = 0xF;
    bool accepted = false;
    bool done = false;
    bool halts = false;
  };

  void begin(std::uint64_t cycle);
  void execute(InFlight& f);
  void retire(std::uint64_t cycle);
  void raise(FaultKind kind, Address addr, std::string cause);
  void complete_load(const MmiPort& port);

  const Rom& rom_;
  CycleCostTable costs_;
  CpuState state_;
  std::optional<InFlight> cur_;
  std::uint64_t now_ = 0;
  TraceSink* trace_ = nullptr;
};

}  // namespace rvdsp
