#include "rvdsp/bus.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>

namespace rvdsp {

namespace {

std::string describe(const BusTransaction& t, const char* what) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s %s 0x%08X%s", what, t.write ? "write" : "read", t.addr,
                t.error == BusError::None ? "" : " (error)");
  return buf;
}

}  // namespace

std::string_view to_string(Requester r) {
  switch (r) {
    case Requester::Cpu: return "cpu";
    case Requester::ConvDsp: return "conv_dsp";
    case Requester::DotDsp: return "dot_dsp";
  }
  return "?";
}

std::string_view to_string(BusError e) {
  switch (e) {
    case BusError::None: return "none";
    case BusError::Unmapped: return "unmapped";
    case BusError::Misaligned: return "misaligned";
    case BusError::RomWrite: return "rom_write";
    case BusError::RegisterAccess: return "register_access";
  }
  return "?";
}

std::optional<Requester> arbitrate(bool cpu_pending, bool conv_pending, bool dot_pending) noexcept {
  if (cpu_pending) return Requester::Cpu;
  if (conv_pending) return Requester::ConvDsp;
  if (dot_pending) return Requester::DotDsp;
  return std::nullopt;
}

Bus::Bus(Rom& rom, Sram& sram, RegisterSlave& conv, RegisterSlave& dot)
    : rom_(rom), sram_(sram), conv_(conv), dot_(dot) {}

std::uint64_t Bus::total_grants() const noexcept {
  std::uint64_t n = 0;
  for (const auto& c : counters_) n += c.grants;
  return n;
}

std::uint64_t Bus::total_completions() const noexcept {
  std::uint64_t n = 0;
  for (const auto& c : counters_) n += c.completions;
  return n;
}

void Bus::step(std::uint64_t cycle, const Ports& ports) {
  last_ = {};

  for (std::size_t r = 0; r < kRequesterCount; ++r) {
    MmiPort* port = ports[r];
    if (port == nullptr) continue;
    port->ready = false;
    port->done = false;
    port->done_write = false;
    port->error = BusError::None;

    if (auto& t = data_phase_[r]) {
      t->state = TxnState::Done;
      t->done_cycle = cycle;
      port->done = true;
      port->done_write = t->write;
      port->rddata = t->rdata;
      port->error = t->error;
      ++counters_[r].completions;
      ++last_.completions;
      if (trace_ && trace_->wants(TraceLevel::Verbose)) {
        trace_->record(cycle, to_string(t->requester), describe(*t, "done"));
      }
      t.reset();
    }
  }

  for (std::size_t r = 0; r < kRequesterCount; ++r) {
    MmiPort* port = ports[r];
    auto& pend = pending_[r];
    if (port == nullptr || !port->req) {
      if (pend) {
        throw std::logic_error(std::string(to_string(static_cast<Requester>(r))) +
                               " withdrew a request before it was granted");
      }
      continue;
    }

    if (pend) {
      if (pend->addr != port->addr || pend->write != port->wr_en ||
          (pend->write && (pend->wdata != port->wrdata || pend->byte_mask != port->byte_mask))) {
        throw std::logic_error(std::string(to_string(static_cast<Requester>(r))) +
                               " changed a pending request");
      }
    } else {
      BusTransaction t;
      t.id = next_id_++;
      t.requester = static_cast<Requester>(r);
      t.addr = port->addr;
      t.write = port->wr_en;
      t.wdata = port->wrdata;
      t.byte_mask = port->byte_mask;
      t.region = classify_address(port->addr).region;
      t.posted_cycle = cycle;
      ++counters_[r].posted;
      pend = t;
    }

    if (pend->addr % kWordBytes != 0 || pend->region != Region::DataMem) {
      // The response lines already carry a data-phase completion this cycle.
      if (port->done) continue;
      serve_direct(cycle, *pend, *port);
      pend.reset();
    } else {
      last_.pending[r] = true;
    }
  }

  last_.granted = arbitrate(last_.pending[0], last_.pending[1], last_.pending[2]);

  for (std::size_t r = 0; r < kRequesterCount; ++r) {
    if (!last_.pending[r]) continue;
    if (last_.granted != static_cast<Requester>(r)) {
      ++counters_[r].stalls;
      continue;
    }
    BusTransaction t = *pending_[r];
    pending_[r].reset();
    t.state = TxnState::Granted;
    t.granted_cycle = cycle;
    t.rdata = sram_.access(cycle, t.addr, t.write, t.wdata, t.byte_mask);
    ports[r]->ready = true;
    ++counters_[r].grants;
    if (trace_ && trace_->wants(TraceLevel::Verbose)) {
      trace_->record(cycle, to_string(t.requester), describe(t, "grant"));
    }
    data_phase_[r] = t;
  }
}

void Bus::serve_direct(std::uint64_t cycle, BusTransaction& t, MmiPort& port) {
  const std::size_t r = index_of(t.requester);
  const RegionHit hit = classify_address(t.addr);

  if (t.addr % kWordBytes != 0) {
    t.error = BusError::Misaligned;
  } else {
    switch (hit.region) {
      case Region::InstMem:
        if (t.write) t.error = BusError::RomWrite;
        else t.rdata = rom_.read(t.addr);
        break;
      case Region::ConvRegs:
      case Region::DotRegs: {
        RegisterSlave& slave = hit.region == Region::ConvRegs ? conv_ : dot_;
        if (t.write && t.byte_mask != 0xF) {
          t.error = BusError::RegisterAccess;
          break;
        }
        const AxiResult res =
            t.write ? slave.axi_write(hit.offset, t.wdata) : slave.axi_read(hit.offset);
        if (res.status == AxiResult::Status::Error) t.error = BusError::RegisterAccess;
        else if (!t.write) t.rdata = res.data;
        break;
      }
      case Region::Reserved:
        if (t.write) ++reserved_writes_;
        t.rdata = 0;
        break;
      case Region::Unmapped:
      case Region::DataMem:  // DataMem never reaches here
        t.error = BusError::Unmapped;
        break;
    }
  }

  ++counters_[r].register_accesses;
  if (t.error != BusError::None) ++counters_[r].errors;
  t.state = TxnState::Done;
  t.granted_cycle = cycle;
  t.done_cycle = cycle;
  port.ready = true;
  port.done = true;
  port.done_write = t.write;
  port.rddata = t.rdata;
  port.error = t.error;
  if (trace_ && trace_->wants(TraceLevel::Verbose)) {
    trace_->record(cycle, to_string(t.requester), describe(t, "direct"));
  }
}

}  // namespace rvdsp
