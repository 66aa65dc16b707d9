#pragma once

// DSP_CONV1D: memory-mapped 1D convolution engine.
//
//   y[i] = sum_{j<K} x[i+j] * h[j],   i = 0 .. N-K
//
// Per output the FSM spends 3 cycles per tap (x read, h read, MAC) and one
// cycle posting the y write, so an uncontended run is busy for
// (N-K+1)(3K+1) cycles. The accumulator clear normally done in a separate
// INIT_OUT state happens on entry to the first tap of each output.

#include <cstdint>

#include "rvdsp/bus.hpp"
#include "rvdsp/dsp_common.hpp"
#include "rvdsp/mac.hpp"
#include "rvdsp/trace.hpp"

namespace rvdsp {

namespace conv_reg {
inline constexpr std::uint32_t kInAddr = 0x00;
inline constexpr std::uint32_t kKernAddr = 0x04;
inline constexpr std::uint32_t kOutAddr = 0x08;
inline constexpr std::uint32_t kInLen = 0x0C;
inline constexpr std::uint32_t kKernLen = 0x10;
inline constexpr std::uint32_t kControl = 0x14;
inline constexpr std::uint32_t kStatus = 0x18;    // read-only
inline constexpr std::uint32_t kIrqClear = 0x1C;  // write-only
}  // namespace conv_reg

struct ConvConfig {
  Address in_addr = 0;
  Address kern_addr = 0;
  Address out_addr = 0;
  std::uint32_t in_len = 0;    // N
  std::uint32_t kern_len = 0;  // K

  std::uint64_t outputs() const noexcept {
    return kern_len == 0 || in_len < kern_len ? 0 : std::uint64_t{in_len} - kern_len + 1;
  }
  friend bool operator==(const ConvConfig&, const ConvConfig&) = default;
};

/// Start-time checks; returns DspFault::None when the run may proceed.
DspFault validate(const ConvConfig& cfg) noexcept;

enum class ConvState : std::uint8_t { Idle, KernelLoop, OutWrite, Done };
enum class TapPhase : std::uint8_t { ReadX, ReadH, Mac };

std::string_view to_string(ConvState s);

class Conv1dAccelerator final : public RegisterSlave {
 public:
  explicit Conv1dAccelerator(TruncationPolicy policy = TruncationPolicy::Wrap) : policy_(policy) {}

  AxiResult axi_read(std::uint32_t offset) override;
  AxiResult axi_write(std::uint32_t offset, Word value) override;

  /// Drives the request half of the port for this cycle.
  void post(std::uint64_t cycle, MmiPort& port);
  /// Consumes the response half after the bus step.
  void observe(std::uint64_t cycle, const MmiPort& port);

  ConvState state() const noexcept { return state_; }
  TapPhase phase() const noexcept { return phase_; }
  bool busy() const noexcept { return state_ == ConvState::KernelLoop || state_ == ConvState::OutWrite; }
  bool irq_line() const noexcept { return irq_; }
  Word status() const noexcept { return status_; }
  DspFault fault() const noexcept { return fault_; }

  const ConvConfig& config() const noexcept { return regs_; }
  const ConvConfig& latched() const noexcept { return latched_; }
  std::uint32_t out_idx() const noexcept { return out_idx_; }
  std::uint32_t kern_idx() const noexcept { return kern_idx_; }
  std::int64_t accumulator() const noexcept { return mac_.accumulator(); }
  const DspCounters& counters() const noexcept { return counters_; }

  TruncationPolicy policy() const noexcept { return policy_; }
  void set_policy(TruncationPolicy p) noexcept { policy_ = p; }
  void set_trace(TraceSink* sink) noexcept { trace_ = sink; }

 private:
  enum class Tag : std::uint8_t { X, H, Y };

  Address x_addr() const noexcept { return latched_.in_addr + 4 * (out_idx_ + kern_idx_); }
  Address h_addr() const noexcept { return latched_.kern_addr + 4 * kern_idx_; }
  Address y_addr() const noexcept { return latched_.out_addr + 4 * out_idx_; }

  void start();
  void begin_output();
  void finish();
  void fail(DspFault why);
  void event(const char* fmt, ...) const;

  TruncationPolicy policy_;
  ConvConfig regs_;
  ConvConfig latched_;
  Word control_ = 0;
  Word status_ = 0;
  bool irq_ = false;
  DspFault fault_ = DspFault::None;

  ConvState state_ = ConvState::Idle;
  TapPhase phase_ = TapPhase::ReadX;
  std::uint32_t out_idx_ = 0;
  std::uint32_t kern_idx_ = 0;
  MacUnit mac_;
  std::int32_t x_val_ = 0;
  std::int32_t h_val_ = 0;
  bool h_valid_ = false;
  TagQueue<Tag> outstanding_;

  std::uint64_t now_ = 0;
  ConfigWindow window_;
  DspCounters counters_;
  TraceSink* trace_ = nullptr;
};

}  // namespace rvdsp
