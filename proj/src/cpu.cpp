#include "rvdsp/cpu.hpp"

#include <cstdio>
#include <stdexcept>

namespace rvdsp {

void CycleCostTable::set(CostClass c, std::uint32_t cycles) {
  if (cycles == 0) {
    throw std::invalid_argument("cost for " + std::string(to_string(c)) + " must be positive");
  }
  cycles_[idx(c)] = cycles;
}

std::string_view to_string(FaultKind k) {
  switch (k) {
    case FaultKind::IllegalInstruction: return "illegal_instruction";
    case FaultKind::FetchFault: return "fetch_fault";
    case FaultKind::Misaligned: return "misaligned_access";
    case FaultKind::LoadFault: return "load_fault";
    case FaultKind::StoreFault: return "store_fault";
  }
  return "?";
}

void Cpu::reset(Address entry) {
  state_ = {};
  state_.regs.pc = entry;
  cur_.reset();
}

void Cpu::raise(FaultKind kind, Address addr, std::string cause) {
  Fault f;
  f.kind = kind;
  f.pc = cur_ ? cur_->pc : state_.regs.pc;
  f.word = cur_ ? cur_->word : 0;
  f.addr = addr;
  f.cause = std::move(cause);
  if (trace_ && trace_->wants(TraceLevel::Events)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "fault %s pc=0x%08X addr=0x%08X: %s",
                  std::string(to_string(kind)).c_str(), f.pc, addr, f.cause.c_str());
    trace_->record(now_, "cpu", buf);
  }
  state_.fault = std::move(f);
  cur_.reset();
}

void Cpu::post(std::uint64_t cycle, MmiPort& port) {
  now_ = cycle;
  port.idle();
  if (!running()) return;
  if (!cur_) begin(cycle);
  if (!cur_ || !cur_->mem || cur_->accepted) return;
  if (cur_->write) port.request_write(cur_->bus_addr, cur_->wdata, cur_->mask);
  else port.request_read(cur_->bus_addr);
}

void Cpu::begin(std::uint64_t /*cycle*/) {
  const Address pc = state_.regs.pc;
  if (pc % kWordBytes != 0 || classify_address(pc).region != Region::InstMem) {
    ++state_.cycles;
    raise(FaultKind::FetchFault, pc, "instruction fetch outside InstMem");
    return;
  }
  const Word word = rom_.read(pc);
  IllegalInstruction why;
  const auto in = decode(word, &why);
  InFlight f;
  f.word = word;
  f.pc = pc;
  if (!in) {
    cur_ = f;
    ++state_.cycles;
    raise(FaultKind::IllegalInstruction, pc, why.reason);
    return;
  }
  f.in = *in;
  f.next_pc = pc + 4;
  f.cost_class = in->cost();
  cur_ = f;
  execute(*cur_);
  if (cur_) cur_->cost = costs_[cur_->cost_class];
}

void Cpu::execute(InFlight& f) {
  RegisterFile& r = state_.regs;
  const Instruction& in = f.in;
  const Word a = r.read(in.rs1);
  const Word b = r.read(in.rs2);
  const auto sa = static_cast<std::int32_t>(a);
  const auto sb = static_cast<std::int32_t>(b);
  const auto imm = static_cast<Word>(in.imm);

  auto branch = [&](bool taken) {
    if (taken) {
      f.next_pc = f.pc + imm;
      f.cost_class = CostClass::BranchTaken;
    }
  };
  auto load = [&](Width w, bool is_signed) {
    f.mem = true;
    f.width = w;
    f.is_signed = is_signed;
    f.addr = a + imm;
    f.bus_addr = w == Width::Full ? f.addr : (f.addr & ~Address{3});
  };
  auto store = [&](Width w) {
    f.mem = true;
    f.write = true;
    f.width = w;
    f.addr = a + imm;
    const unsigned lane = f.addr & 3;
    switch (w) {
      case Width::Full:
        f.bus_addr = f.addr;
        f.wdata = b;
        f.mask = 0xF;
        break;
      case Width::Half:
        f.bus_addr = f.addr & ~Address{3};
        f.wdata = (b & 0xFFFF) << (8 * lane);
        f.mask = static_cast<std::uint8_t>(0x3u << lane);
        break;
      case Width::Byte:
        f.bus_addr = f.addr & ~Address{3};
        f.wdata = (b & 0xFF) << (8 * lane);
        f.mask = static_cast<std::uint8_t>(0x1u << lane);
        break;
    }
  };

  switch (in.op) {
    case Op::Lui: r.write(in.rd, imm); break;
    case Op::Auipc: r.write(in.rd, f.pc + imm); break;
    case Op::Jal:
      r.write(in.rd, f.pc + 4);
      f.next_pc = f.pc + imm;
      break;
    case Op::Jalr:
      f.next_pc = (a + imm) & ~Word{1};
      r.write(in.rd, f.pc + 4);
      break;
    case Op::Beq: branch(a == b); break;
    case Op::Bne: branch(a != b); break;
    case Op::Blt: branch(sa < sb); break;
    case Op::Bge: branch(sa >= sb); break;
    case Op::Bltu: branch(a < b); break;
    case Op::Bgeu: branch(a >= b); break;
    case Op::Lb: load(Width::Byte, true); break;
    case Op::Lh: load(Width::Half, true); break;
    case Op::Lw: load(Width::Full, false); break;
    case Op::Lbu: load(Width::Byte, false); break;
    case Op::Lhu: load(Width::Half, false); break;
    case Op::Sb: store(Width::Byte); break;
    case Op::Sh: store(Width::Half); break;
    case Op::Sw: store(Width::Full); break;
    case Op::Addi: r.write(in.rd, a + imm); break;
    case Op::Slti: r.write(in.rd, sa < in.imm ? 1 : 0); break;
    case Op::Sltiu: r.write(in.rd, a < imm ? 1 : 0); break;
    case Op::Xori: r.write(in.rd, a ^ imm); break;
    case Op::Ori: r.write(in.rd, a | imm); break;
    case Op::Andi: r.write(in.rd, a & imm); break;
    case Op::Slli: r.write(in.rd, a << (imm & 31)); break;
    case Op::Srli: r.write(in.rd, a >> (imm & 31)); break;
    case Op::Srai: r.write(in.rd, static_cast<Word>(sa >> (imm & 31))); break;
    case Op::Add: r.write(in.rd, a + b); break;
    case Op::Sub: r.write(in.rd, a - b); break;
    case Op::Sll: r.write(in.rd, a << (b & 31)); break;
    case Op::Slt: r.write(in.rd, sa < sb ? 1 : 0); break;
    case Op::Sltu: r.write(in.rd, a < b ? 1 : 0); break;
    case Op::Xor: r.write(in.rd, a ^ b); break;
    case Op::Srl: r.write(in.rd, a >> (b & 31)); break;
    case Op::Sra: r.write(in.rd, static_cast<Word>(sa >> (b & 31))); break;
    case Op::Or: r.write(in.rd, a | b); break;
    case Op::And: r.write(in.rd, a & b); break;
    case Op::Mul: r.write(in.rd, a * b); break;
    case Op::Mulh:
      r.write(in.rd, static_cast<Word>(static_cast<std::uint64_t>(std::int64_t{sa} * sb) >> 32));
      break;
    case Op::Mulhsu:
      r.write(in.rd, static_cast<Word>(
                         static_cast<std::uint64_t>(std::int64_t{sa} * std::int64_t{b}) >> 32));
      break;
    case Op::Mulhu: r.write(in.rd, static_cast<Word>((std::uint64_t{a} * b) >> 32)); break;
    case Op::Fence: break;
    case Op::Ecall:
      // Report a0 through the mailbox, then stop.
      f.mem = true;
      f.write = true;
      f.addr = f.bus_addr = map::kSyscallMailbox;
      f.wdata = r.read(reg::a0);
      f.halts = true;
      break;
    case Op::Ebreak: f.halts = true; break;
  }

  if (f.mem && f.width == Width::Half && (f.addr & 1)) {
    ++state_.cycles;
    raise(FaultKind::Misaligned, f.addr, "halfword access at an odd address");
  } else if (f.mem && f.width == Width::Full && (f.addr & 3)) {
    ++state_.cycles;
    raise(FaultKind::Misaligned, f.addr, "word access not 4-byte aligned");
  }
}

void Cpu::complete_load(const MmiPort& port) {
  InFlight& f = *cur_;
  if (port.error != BusError::None) {
    raise(f.write ? FaultKind::StoreFault : FaultKind::LoadFault, f.addr,
          "bus error: " + std::string(to_string(port.error)));
    return;
  }
  f.done = true;
  if (f.write) return;
  const unsigned shift = 8 * (f.addr & 3);
  Word v = port.rddata;
  switch (f.width) {
    case Width::Full: break;
    case Width::Half:
      v = (v >> shift) & 0xFFFF;
      if (f.is_signed) v = static_cast<Word>(static_cast<std::int32_t>(v << 16) >> 16);
      break;
    case Width::Byte:
      v = (v >> shift) & 0xFF;
      if (f.is_signed) v = static_cast<Word>(static_cast<std::int32_t>(v << 24) >> 24);
      break;
  }
  state_.regs.write(f.in.rd, v);
}

void Cpu::observe(std::uint64_t cycle, const MmiPort& port) {
  now_ = cycle;
  if (!cur_ || !running()) return;
  InFlight& f = *cur_;
  if (f.mem) {
    if (port.ready) f.accepted = true;
    if (port.done && f.accepted && !f.done) {
      complete_load(port);
      if (!cur_) {
        ++state_.cycles;
        return;
      }
    }
  }
  ++f.elapsed;
  ++state_.cycles;
  if (f.elapsed > f.cost) ++state_.memory_wait_cycles;
  if (f.elapsed >= f.cost && (!f.mem || f.done)) retire(cycle);
}

void Cpu::retire(std::uint64_t cycle) {
  InFlight& f = *cur_;
  ++state_.retired;
  ++state_.class_counts[static_cast<std::size_t>(f.cost_class)];
  state_.regs.pc = f.next_pc;
  if (trace_ && trace_->wants(TraceLevel::Verbose)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "retire 0x%08X ", f.pc);
    trace_->record(cycle, "cpu", buf + disassemble(f.in));
  }
  if (f.halts) {
    state_.halted = true;
    state_.regs.pc = f.pc;
    if (trace_ && trace_->wants(TraceLevel::Events)) {
      trace_->record(cycle, "cpu",
                     std::string(mnemonic(f.in.op)) + " halt retired=" +
                         std::to_string(state_.retired));
    }
  }
  cur_.reset();
}

}  // namespace rvdsp
