#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "rvdsp/mem_map.hpp"
#include "rvdsp/trace.hpp"

namespace rvdsp {

enum class Requester : std::uint8_t { Cpu = 0, ConvDsp = 1, DotDsp = 2 };
inline constexpr std::size_t kRequesterCount = 3;

std::string_view to_string(Requester r);
constexpr std::size_t index_of(Requester r) noexcept { return static_cast<std::size_t>(r); }

/// Fixed-priority grant: Cpu, then ConvDsp, then DotDsp.
std::optional<Requester> arbitrate(bool cpu_pending, bool conv_pending, bool dot_pending) noexcept;

enum class BusError : std::uint8_t {
  None,
  Unmapped,
  Misaligned,
  RomWrite,
  RegisterAccess,  // unknown register offset or sub-word register write
};

std::string_view to_string(BusError e);

/// Memory master handshake. The requester drives the request half before the
/// bus step; the interconnect drives the response half, which is valid for
/// the current cycle only.
///
/// DataMem timing: a request granted in cycle t raises `ready` in cycle t
/// (the SRAM access happens then) and `done` with `rddata` in cycle t+1.
/// The requester may present its next request in the cycle the previous
/// one reports `done`. Register, ROM and Reserved accesses bypass the
/// arbiter and raise `ready` and `done` in the cycle they are presented.
struct MmiPort {
  bool req = false;
  Address addr = 0;
  bool wr_en = false;
  Word wrdata = 0;
  std::uint8_t byte_mask = 0xF;

  bool ready = false;
  bool done = false;
  bool done_write = false;  // the completing transaction was a write
  Word rddata = 0;
  BusError error = BusError::None;

  void request_read(Address a) {
    req = true;
    addr = a;
    wr_en = false;
    byte_mask = 0xF;
  }
  void request_write(Address a, Word data, std::uint8_t mask = 0xF) {
    req = true;
    addr = a;
    wr_en = true;
    wrdata = data;
    byte_mask = mask;
  }
  void idle() { req = false; }
};

enum class TxnState : std::uint8_t { Pending, Granted, Done };

struct BusTransaction {
  std::uint64_t id = 0;
  Requester requester = Requester::Cpu;
  Address addr = 0;
  bool write = false;
  Word wdata = 0;
  std::uint8_t byte_mask = 0xF;
  Region region = Region::Unmapped;
  TxnState state = TxnState::Pending;
  Word rdata = 0;
  BusError error = BusError::None;
  std::uint64_t posted_cycle = 0;
  std::uint64_t granted_cycle = 0;
  std::uint64_t done_cycle = 0;
};

/// AXI-Lite register slave as seen by the interconnect.
struct AxiResult {
  enum class Status : std::uint8_t { Ok, Ignored, ReadOnly, Error };
  Status status = Status::Ok;
  Word data = 0;
};

class RegisterSlave {
 public:
  virtual ~RegisterSlave() = default;
  virtual AxiResult axi_read(std::uint32_t offset) = 0;
  virtual AxiResult axi_write(std::uint32_t offset, Word value) = 0;
};

struct RequesterCounters {
  std::uint64_t posted = 0;
  std::uint64_t grants = 0;       // DataMem grants
  std::uint64_t completions = 0;  // DataMem completions
  std::uint64_t stalls = 0;       // cycles pending on DataMem without a grant
  std::uint64_t register_accesses = 0;
  std::uint64_t errors = 0;
};

/// What happened on the DataMem port in the most recent step.
struct PortCycle {
  std::array<bool, kRequesterCount> pending{};  // DataMem requests presented
  std::optional<Requester> granted;
  std::uint32_t completions = 0;
};

class Bus {
 public:
  Bus(Rom& rom, Sram& sram, RegisterSlave& conv, RegisterSlave& dot);

  using Ports = std::array<MmiPort*, kRequesterCount>;

  /// One bus cycle: deliver data-phase completions, serve register-space
  /// requests, then grant at most one DataMem request.
  void step(std::uint64_t cycle, const Ports& ports);

  const RequesterCounters& counters(Requester r) const { return counters_[index_of(r)]; }
  const PortCycle& last_cycle() const noexcept { return last_; }
  std::uint64_t reserved_writes() const noexcept { return reserved_writes_; }
  std::uint64_t total_grants() const noexcept;
  std::uint64_t total_completions() const noexcept;
  bool in_flight(Requester r) const { return data_phase_[index_of(r)].has_value(); }
  const std::optional<BusTransaction>& pending(Requester r) const {
    return pending_[index_of(r)];
  }

  void set_trace(TraceSink* sink) noexcept { trace_ = sink; }

 private:
  void serve_direct(std::uint64_t cycle, BusTransaction& t, MmiPort& port);

  Rom& rom_;
  Sram& sram_;
  RegisterSlave& conv_;
  RegisterSlave& dot_;
  std::array<std::optional<BusTransaction>, kRequesterCount> pending_;
  std::array<std::optional<BusTransaction>, kRequesterCount> data_phase_;
  std::array<RequesterCounters, kRequesterCount> counters_{};
  PortCycle last_;
  std::uint64_t next_id_ = 1;
  std::uint64_t reserved_writes_ = 0;
  TraceSink* trace_ = nullptr;
};

}  // namespace rvdsp
