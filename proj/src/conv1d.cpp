#include "rvdsp/conv1d.hpp"

#include <cstdarg>
#include <cstdio>

namespace rvdsp {

std::string_view to_string(DspFault f) {
  switch (f) {
    case DspFault::None: return "none";
    case DspFault::ZeroKernel: return "zero_length";
    case DspFault::KernelTooLong: return "kernel_longer_than_input";
    case DspFault::InputRange: return "input_range";
    case DspFault::KernelRange: return "kernel_range";
    case DspFault::OutputRange: return "output_range";
    case DspFault::BusError: return "bus_error";
  }
  return "?";
}

std::string_view to_string(TruncationPolicy p) {
  return p == TruncationPolicy::Wrap ? "wrap" : "saturate";
}

std::string_view to_string(ConvState s) {
  switch (s) {
    case ConvState::Idle: return "IDLE";
    case ConvState::KernelLoop: return "KERNEL_LOOP";
    case ConvState::OutWrite: return "OUT_WRITE";
    case ConvState::Done: return "DONE";
  }
  return "?";
}

DspFault validate(const ConvConfig& cfg) noexcept {
  if (cfg.kern_len == 0) return DspFault::ZeroKernel;
  if (cfg.in_len < cfg.kern_len) return DspFault::KernelTooLong;
  if (!data_range_ok(cfg.in_addr, cfg.in_len)) return DspFault::InputRange;
  if (!data_range_ok(cfg.kern_addr, cfg.kern_len)) return DspFault::KernelRange;
  if (!data_range_ok(cfg.out_addr, cfg.outputs())) return DspFault::OutputRange;
  return DspFault::None;
}

void Conv1dAccelerator::event(const char* fmt, ...) const {
  if (trace_ == nullptr || !trace_->wants(TraceLevel::Events)) return;
  char buf[160];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  trace_->record(now_, "conv_dsp", buf);
}

AxiResult Conv1dAccelerator::axi_read(std::uint32_t offset) {
  switch (offset) {
    case conv_reg::kInAddr: return {AxiResult::Status::Ok, regs_.in_addr};
    case conv_reg::kKernAddr: return {AxiResult::Status::Ok, regs_.kern_addr};
    case conv_reg::kOutAddr: return {AxiResult::Status::Ok, regs_.out_addr};
    case conv_reg::kInLen: return {AxiResult::Status::Ok, regs_.in_len};
    case conv_reg::kKernLen: return {AxiResult::Status::Ok, regs_.kern_len};
    case conv_reg::kControl: return {AxiResult::Status::Ok, control_ & control_bits::kMask};
    case conv_reg::kStatus: return {AxiResult::Status::Ok, status_};
    case conv_reg::kIrqClear: return {AxiResult::Status::Ok, 0};
    default: return {AxiResult::Status::Error, 0};
  }
}

AxiResult Conv1dAccelerator::axi_write(std::uint32_t offset, Word value) {
  Word* config = nullptr;
  switch (offset) {
    case conv_reg::kInAddr: config = &regs_.in_addr; break;
    case conv_reg::kKernAddr: config = &regs_.kern_addr; break;
    case conv_reg::kOutAddr: config = &regs_.out_addr; break;
    case conv_reg::kInLen: config = &regs_.in_len; break;
    case conv_reg::kKernLen: config = &regs_.kern_len; break;
    case conv_reg::kControl:
      if (busy()) {
        ++counters_.ignored_writes;
        return {AxiResult::Status::Ignored, 0};
      }
      control_ = value & control_bits::kMask;
      if (value & control_bits::kStart) {
        if (state_ != ConvState::Idle) {
          // DONE must be acknowledged through IRQ_CLEAR before a new start.
          ++counters_.ignored_writes;
          return {AxiResult::Status::Ignored, 0};
        }
        start();
      }
      return {};
    case conv_reg::kStatus:
      ++counters_.readonly_writes;
      event("warning: write 0x%08X to read-only STATUS ignored", value);
      return {AxiResult::Status::ReadOnly, 0};
    case conv_reg::kIrqClear:
      if (busy()) {
        ++counters_.ignored_writes;
        return {AxiResult::Status::Ignored, 0};
      }
      if ((value & 1u) && state_ == ConvState::Done) {
        irq_ = false;
        status_ = 0;
        state_ = ConvState::Idle;
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

void Conv1dAccelerator::start() {
  ++counters_.starts;
  counters_.config_write_cycles += window_.close(now_);
  latched_ = regs_;
  out_idx_ = 0;
  if (const DspFault why = validate(latched_); why != DspFault::None) {
    fail(why);
    return;
  }
  status_ = 0;
  irq_ = false;
  fault_ = DspFault::None;
  event("start N=%u K=%u x=0x%08X h=0x%08X y=0x%08X", latched_.in_len, latched_.kern_len,
        latched_.in_addr, latched_.kern_addr, latched_.out_addr);
  begin_output();
}

void Conv1dAccelerator::begin_output() {
  state_ = ConvState::KernelLoop;
  phase_ = TapPhase::ReadX;
  kern_idx_ = 0;
  mac_.clear();
  h_valid_ = false;
}

void Conv1dAccelerator::finish() {
  state_ = ConvState::Done;
  status_ |= status_bits::kDone;
  irq_ = (control_ & control_bits::kIntEn) != 0;
  ++counters_.completions;
  event("done outputs=%u irq=%d", out_idx_, irq_ ? 1 : 0);
}

void Conv1dAccelerator::fail(DspFault why) {
  fault_ = why;
  ++counters_.errors;
  const bool was_done = (status_ & status_bits::kDone) != 0;
  status_ |= status_bits::kError | status_bits::kDone;
  state_ = ConvState::Done;
  irq_ = (control_ & control_bits::kIntEn) != 0;
  if (!was_done) ++counters_.completions;
  event("error %s", std::string(to_string(why)).c_str());
}

void Conv1dAccelerator::post(std::uint64_t cycle, MmiPort& port) {
  now_ = cycle;
  port.idle();
  switch (state_) {
    case ConvState::KernelLoop:
      ++counters_.busy_cycles;
      if (phase_ == TapPhase::ReadX) port.request_read(x_addr());
      else if (phase_ == TapPhase::ReadH) port.request_read(h_addr());
      break;
    case ConvState::OutWrite:
      ++counters_.busy_cycles;
      port.request_write(y_addr(), truncate_accumulator(mac_.accumulator(), policy_));
      break;
    case ConvState::Idle:
    case ConvState::Done: break;
  }
}

void Conv1dAccelerator::observe(std::uint64_t cycle, const MmiPort& port) {
  now_ = cycle;
  bool completion = port.done;

  auto complete = [&](Tag tag) {
    if (port.error != BusError::None) {
      fail(DspFault::BusError);
      return;
    }
    if (tag == Tag::X) {
      x_val_ = static_cast<std::int32_t>(port.rddata);
    } else if (tag == Tag::H) {
      h_val_ = static_cast<std::int32_t>(port.rddata);
      h_valid_ = true;
    }
  };

  // A data-phase completion belongs to a request granted in an earlier cycle.
  if (completion && !outstanding_.empty()) {
    complete(outstanding_.pop());
    completion = false;
  }
  if (!busy()) return;

  if (port.ready) {
    if (state_ == ConvState::KernelLoop && phase_ == TapPhase::ReadX) {
      outstanding_.push(Tag::X);
      phase_ = TapPhase::ReadH;
    } else if (state_ == ConvState::KernelLoop && phase_ == TapPhase::ReadH) {
      outstanding_.push(Tag::H);
      phase_ = TapPhase::Mac;
    } else if (state_ == ConvState::OutWrite) {
      outstanding_.push(Tag::Y);
      ++out_idx_;
      if (out_idx_ < latched_.outputs()) begin_output();
      else finish();
    }
  }
  // Same-cycle completion of a request that bypassed the arbiter.
  if (completion && !outstanding_.empty()) {
    complete(outstanding_.pop());
    if (!busy()) return;
  }

  if (state_ == ConvState::KernelLoop && phase_ == TapPhase::Mac && h_valid_) {
    mac_.accumulate(x_val_, h_val_);
    ++counters_.mac_count;
    ++kern_idx_;
    h_valid_ = false;
    event("mac out=%u k=%u x=%d h=%d acc=%lld", out_idx_, kern_idx_, x_val_, h_val_,
          static_cast<long long>(mac_.accumulator()));
    if (kern_idx_ < latched_.kern_len) {
      phase_ = TapPhase::ReadX;
    } else {
      state_ = ConvState::OutWrite;
    }
  }
}

}  // namespace rvdsp
