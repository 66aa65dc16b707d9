#include "rvdsp/soc.hpp"

#include <cstdio>

namespace rvdsp {

void SimConfig::validate() const {
  if (max_cycles == 0) throw std::invalid_argument("max_cycles must be positive");
  if (!(frequency_hz > 0)) throw std::invalid_argument("frequency must be positive");
}

HostAccessError::HostAccessError(Address addr, BusError error)
    : std::runtime_error([&] {
        char buf[80];
        std::snprintf(buf, sizeof buf, "host access to 0x%08X failed: ", addr);
        return std::string(buf) + std::string(to_string(error));
      }()),
      addr_(addr),
      error_(error) {}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Halted: return "halted";
    case StopReason::Faulted: return "faulted";
    case StopReason::Timeout: return "timeout";
  }
  return "?";
}

Soc::Soc(const SimConfig& cfg)
    : cfg_(cfg), conv_(cfg.truncation), bus_(rom_, sram_, conv_, dot_), cpu_(rom_, cfg.costs) {
  cfg_.validate();
}

void Soc::set_trace(TraceSink* sink) {
  trace_ = sink;
  bus_.set_trace(sink);
  cpu_.set_trace(sink);
  conv_.set_trace(sink);
  dot_.set_trace(sink);
}

void Soc::load_program(std::span<const Word> words, Address at) {
  for (const Word w : words) {
    rom_.load(at, w);
    at += kWordBytes;
  }
}

void Soc::write_data(Address at, std::span<const Word> words) {
  for (const Word w : words) {
    sram_.poke(at, w);
    at += kWordBytes;
  }
}

void Soc::write_data(Address at, std::span<const std::int32_t> values) {
  for (const std::int32_t v : values) {
    sram_.poke(at, static_cast<Word>(v));
    at += kWordBytes;
  }
}

std::vector<Word> Soc::read_data(Address at, std::size_t count) const {
  std::vector<Word> out(count);
  for (auto& w : out) {
    w = sram_.peek(at);
    at += kWordBytes;
  }
  return out;
}

void Soc::enable_cpu(Address entry) {
  cpu_.reset(entry);
  cpu_enabled_ = true;
  host_port_.idle();
}

void Soc::step() {
  const std::uint64_t c = cycle_;
  MmiPort& first = cpu_enabled_ ? cpu_port_ : host_port_;
  if (cpu_enabled_) cpu_.post(c, cpu_port_);
  conv_.post(c, conv_port_);
  dot_.post(c, dot_port_);

  bus_.step(c, {&first, &conv_port_, &dot_port_});

  if (cpu_enabled_) cpu_.observe(c, cpu_port_);
  conv_.observe(c, conv_port_);
  dot_.observe(c, dot_port_);

  if (trace_ && trace_->wants(TraceLevel::Events)) {
    if (conv_.irq_line() != conv_irq_) trace_->record(c, "conv_dsp", conv_.irq_line() ? "irq 1" : "irq 0");
    if (dot_.irq_line() != dot_irq_) trace_->record(c, "dot_dsp", dot_.irq_line() ? "irq 1" : "irq 0");
  }
  conv_irq_ = conv_.irq_line();
  dot_irq_ = dot_.irq_line();
  ++cycle_;
}

StopReason Soc::run() {
  while (cpu_.running()) {
    if (cycle_ >= cfg_.max_cycles) return StopReason::Timeout;
    step();
  }
  return cpu_.state().fault ? StopReason::Faulted : StopReason::Halted;
}

void Soc::check_timeout() const {
  if (cycle_ >= cfg_.max_cycles) throw SimulationTimeout(cfg_.max_cycles);
}

Word Soc::host_access(Address addr, bool write, Word value) {
  if (cpu_enabled_) throw std::logic_error("host access while the CPU owns the bus port");
  if (write) host_port_.request_write(addr, value);
  else host_port_.request_read(addr);
  bool accepted = false;
  for (;;) {
    check_timeout();
    step();
    if (host_port_.ready) {
      accepted = true;
      host_port_.idle();
    }
    if (accepted && host_port_.done) {
      if (host_port_.error != BusError::None) throw HostAccessError(addr, host_port_.error);
      return host_port_.rddata;
    }
  }
}

Word Soc::host_read(Address addr) { return host_access(addr, false, 0); }
void Soc::host_write(Address addr, Word value) { host_access(addr, true, value); }

Word Soc::host_poll(Address status_addr, Word mask) {
  for (;;) {
    const Word v = host_read(status_addr);
    if (v & mask) return v;
  }
}

void Soc::idle(std::uint64_t cycles) {
  for (std::uint64_t i = 0; i < cycles; ++i) {
    check_timeout();
    step();
  }
}

namespace {

template <typename Dsp>
DspReport dsp_report(const Dsp& d) {
  DspReport r;
  r.counters = d.counters();
  r.irq = d.irq_line();
  r.status = d.status();
  r.state = std::string(to_string(d.state()));
  r.fault = std::string(to_string(d.fault()));
  return r;
}

}  // namespace

CycleReport Soc::report() const {
  CycleReport r;
  r.total_cycles = cycle_;
  for (std::size_t i = 0; i < kRequesterCount; ++i) {
    const auto& c = bus_.counters(static_cast<Requester>(i));
    r.bus[i] = {c.posted, c.grants, c.completions, c.stalls, c.register_accesses, c.errors};
  }
  const CpuState& s = cpu_.state();
  r.cpu.enabled = cpu_enabled_;
  r.cpu.halted = s.halted;
  r.cpu.retired = s.retired;
  r.cpu.cycles = s.cycles;
  r.cpu.memory_wait_cycles = s.memory_wait_cycles;
  r.cpu.class_counts = s.class_counts;
  r.cpu.fault = s.fault;
  r.conv = dsp_report(conv_);
  r.dot = dsp_report(dot_);
  r.reserved_writes = bus_.reserved_writes();
  r.sram_accesses = sram_.accesses();
  return r;
}

}  // namespace rvdsp
