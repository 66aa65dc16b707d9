#include "rvdsp/dotprod.hpp"

#include <cstdarg>
#include <cstdio>
#include <string>

namespace rvdsp {

std::string_view to_string(DotState s) {
  switch (s) {
    case DotState::Idle: return "IDLE";
    case DotState::DpLoop: return "DP_LOOP";
    case DotState::Latch: return "LATCH";
    case DotState::Done: return "DONE";
  }
  return "?";
}

DspFault validate(const DotConfig& cfg) noexcept {
  if (cfg.len == 0) return DspFault::None;
  if (!data_range_ok(cfg.va_addr, cfg.len)) return DspFault::InputRange;
  if (!data_range_ok(cfg.vb_addr, cfg.len)) return DspFault::KernelRange;
  return DspFault::None;
}

void DotProductAccelerator::event(const char* fmt, ...) const {
  if (trace_ == nullptr || !trace_->wants(TraceLevel::Events)) return;
  char buf[160];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  trace_->record(now_, "dot_dsp", buf);
}

AxiResult DotProductAccelerator::axi_read(std::uint32_t offset) {
  const auto u = static_cast<std::uint64_t>(result_);
  switch (offset) {
    case dot_reg::kVaAddr: return {AxiResult::Status::Ok, regs_.va_addr};
    case dot_reg::kVbAddr: return {AxiResult::Status::Ok, regs_.vb_addr};
    case dot_reg::kLen: return {AxiResult::Status::Ok, regs_.len};
    case dot_reg::kControl: return {AxiResult::Status::Ok, control_ & control_bits::kMask};
    case dot_reg::kStatus: return {AxiResult::Status::Ok, status_};
    case dot_reg::kResultLo: return {AxiResult::Status::Ok, static_cast<Word>(u)};
    case dot_reg::kResultHi: return {AxiResult::Status::Ok, static_cast<Word>(u >> 32)};
    case dot_reg::kIrqClear: return {AxiResult::Status::Ok, 0};
    default: return {AxiResult::Status::Error, 0};
  }
}

AxiResult DotProductAccelerator::axi_write(std::uint32_t offset, Word value) {
  Word* config = nullptr;
  switch (offset) {
    case dot_reg::kVaAddr: config = &regs_.va_addr; break;
    case dot_reg::kVbAddr: config = &regs_.vb_addr; break;
    case dot_reg::kLen: config = &regs_.len; break;
    case dot_reg::kControl:
      if (busy()) {
        ++counters_.ignored_writes;
        return {AxiResult::Status::Ignored, 0};
      }
      control_ = value & control_bits::kMask;
      if (value & control_bits::kStart) {
        if (state_ != DotState::Idle) {
          ++counters_.ignored_writes;
          return {AxiResult::Status::Ignored, 0};
        }
        start();
      }
      return {};
    case dot_reg::kStatus:
    case dot_reg::kResultLo:
    case dot_reg::kResultHi:
      ++counters_.readonly_writes;
      event("warning: write 0x%08X to read-only offset 0x%02X ignored", value, offset);
      return {AxiResult::Status::ReadOnly, 0};
    case dot_reg::kIrqClear:
      if (busy()) {
        ++counters_.ignored_writes;
        return {AxiResult::Status::Ignored, 0};
      }
      if ((value & 1u) && state_ == DotState::Done) {
        irq_ = false;
        status_ = 0;
        state_ = DotState::Idle;
        event("irq_clear -> IDLE");
      }
      return {};
    default: return {AxiResult::Status::Error, 0};
  }

  if (busy()) {
    ++counters_.ignored_writes;
    return {AxiResult::Status::Ignored, 0};
  }
  *config = value;
  ++counters_.config_writes;
  window_.note_write(now_);
  return {};
}

void DotProductAccelerator::start() {
  ++counters_.starts;
  counters_.config_write_cycles += window_.close(now_);
  latched_ = regs_;
  vec_idx_ = 0;
  mac_.clear();
  b_valid_ = false;
  if (const DspFault why = validate(latched_); why != DspFault::None) {
    fail(why);
    return;
  }
  status_ = 0;
  irq_ = false;
  fault_ = DspFault::None;
  event("start L=%u a=0x%08X b=0x%08X", latched_.len, latched_.va_addr, latched_.vb_addr);
  if (latched_.len == 0) {
    result_ = 0;
    finish();
    return;
  }
  state_ = DotState::DpLoop;
  phase_ = ElementPhase::ReadA;
}

void DotProductAccelerator::finish() {
  state_ = DotState::Done;
  status_ |= status_bits::kDone;
  irq_ = (control_ & control_bits::kIntEn) != 0;
  ++counters_.completions;
  event("done result=%lld irq=%d", static_cast<long long>(result_), irq_ ? 1 : 0);
}

void DotProductAccelerator::fail(DspFault why) {
  fault_ = why;
  ++counters_.errors;
  const bool was_done = (status_ & status_bits::kDone) != 0;
  status_ |= status_bits::kError | status_bits::kDone;
  state_ = DotState::Done;
  irq_ = (control_ & control_bits::kIntEn) != 0;
  if (!was_done) ++counters_.completions;
  event("error %s", std::string(to_string(why)).c_str());
}

void DotProductAccelerator::post(std::uint64_t cycle, MmiPort& port) {
  now_ = cycle;
  port.idle();
  switch (state_) {
    case DotState::DpLoop:
      ++counters_.busy_cycles;
      if (phase_ == ElementPhase::ReadA) port.request_read(latched_.va_addr + 4 * vec_idx_);
      else if (phase_ == ElementPhase::ReadB) port.request_read(latched_.vb_addr + 4 * vec_idx_);
      break;
    case DotState::Latch:
      // DONE entry: the accumulator is copied into RESULT_LO/HI this cycle.
      ++counters_.busy_cycles;
      result_ = mac_.accumulator();
      finish();
      break;
    case DotState::Idle:
    case DotState::Done: break;
  }
}

void DotProductAccelerator::observe(std::uint64_t cycle, const MmiPort& port) {
  now_ = cycle;
  bool completion = port.done;

  auto complete = [&](Tag tag) {
    if (port.error != BusError::None) {
      fail(DspFault::BusError);
      return;
    }
    if (tag == Tag::A) {
      a_val_ = static_cast<std::int32_t>(port.rddata);
    } else {
      b_val_ = static_cast<std::int32_t>(port.rddata);
      b_valid_ = true;
    }
  };

  if (completion && !outstanding_.empty()) {
    complete(outstanding_.pop());
    completion = false;
  }
  if (state_ != DotState::DpLoop) return;

  if (port.ready) {
    if (phase_ == ElementPhase::ReadA) {
      outstanding_.push(Tag::A);
      phase_ = ElementPhase::ReadB;
    } else if (phase_ == ElementPhase::ReadB) {
      outstanding_.push(Tag::B);
      phase_ = ElementPhase::Mac;
    }
  }
  if (completion && !outstanding_.empty()) {
    complete(outstanding_.pop());
    if (state_ != DotState::DpLoop) return;
  }

  if (phase_ == ElementPhase::Mac && b_valid_) {
    mac_.accumulate(a_val_, b_val_);
    ++counters_.mac_count;
    ++vec_idx_;
    b_valid_ = false;
    event("mac idx=%u a=%d b=%d acc=%lld", vec_idx_, a_val_, b_val_,
          static_cast<long long>(mac_.accumulator()));
    if (vec_idx_ < latched_.len) phase_ = ElementPhase::ReadA;
    else state_ = DotState::Latch;
  }
}

}  // namespace rvdsp
