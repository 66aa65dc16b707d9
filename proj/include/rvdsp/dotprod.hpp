#pragma once

// DSP_DOT_PRODUCT: Result = sum_{j<L} A[j] * B[j] as a signed 64-bit value.
// Each element takes 3 cycles (A read, B read, MAC); one further cycle
// latches the accumulator into RESULT_LO/HI, so a run is busy for 3L+1
// cycles. L = 0 completes at the start write with a zero result.

#include <cstdint>

#include "rvdsp/bus.hpp"
#include "rvdsp/dsp_common.hpp"
#include "rvdsp/mac.hpp"
#include "rvdsp/trace.hpp"

namespace rvdsp {

namespace dot_reg {
inline constexpr std::uint32_t kVaAddr = 0x00;
inline constexpr std::uint32_t kVbAddr = 0x04;
inline constexpr std::uint32_t kLen = 0x08;
inline constexpr std::uint32_t kControl = 0x0C;
inline constexpr std::uint32_t kStatus = 0x10;    // read-only
inline constexpr std::uint32_t kResultLo = 0x14;  // read-only
inline constexpr std::uint32_t kResultHi = 0x18;  // read-only
inline constexpr std::uint32_t kIrqClear = 0x1C;  // write-only
}  // namespace dot_reg

struct DotConfig {
  Address va_addr = 0;
  Address vb_addr = 0;
  std::uint32_t len = 0;  // L

  friend bool operator==(const DotConfig&, const DotConfig&) = default;
};

DspFault validate(const DotConfig& cfg) noexcept;

enum class DotState : std::uint8_t { Idle, DpLoop, Latch, Done };
enum class ElementPhase : std::uint8_t { ReadA, ReadB, Mac };

std::string_view to_string(DotState s);

class DotProductAccelerator final : public RegisterSlave {
 public:
  AxiResult axi_read(std::uint32_t offset) override;
  AxiResult axi_write(std::uint32_t offset, Word value) override;

  void post(std::uint64_t cycle, MmiPort& port);
  void observe(std::uint64_t cycle, const MmiPort& port);

  DotState state() const noexcept { return state_; }
  bool busy() const noexcept { return state_ == DotState::DpLoop || state_ == DotState::Latch; }
  bool irq_line() const noexcept { return irq_; }
  Word status() const noexcept { return status_; }
  DspFault fault() const noexcept { return fault_; }
  std::int64_t result() const noexcept { return result_; }

  const DotConfig& config() const noexcept { return regs_; }
  std::uint32_t vec_idx() const noexcept { return vec_idx_; }
  std::int64_t accumulator() const noexcept { return mac_.accumulator(); }
  const DspCounters& counters() const noexcept { return counters_; }

  void set_trace(TraceSink* sink) noexcept { trace_ = sink; }

 private:
  enum class Tag : std::uint8_t { A, B };

  void start();
  void finish();
  void fail(DspFault why);
  void event(const char* fmt, ...) const;

  DotConfig regs_;
  DotConfig latched_;
  Word control_ = 0;
  Word status_ = 0;
  bool irq_ = false;
  DspFault fault_ = DspFault::None;
  std::int64_t result_ = 0;

  DotState state_ = DotState::Idle;
  ElementPhase phase_ = ElementPhase::ReadA;
  std::uint32_t vec_idx_ = 0;
  MacUnit mac_;
  std::int32_t a_val_ = 0;
  std::int32_t b_val_ = 0;
  bool b_valid_ = false;
  TagQueue<Tag> outstanding_;

  std::uint64_t now_ = 0;
  ConfigWindow window_;
  DspCounters counters_;
  TraceSink* trace_ = nullptr;
};

}  // namespace rvdsp
