#include "rvdsp/isa.hpp"

#include <array>
#include <cstdio>

namespace rvdsp {

namespace {

struct OpInfo {
  Op op;
  std::string_view name;
  Format format;
  std::uint8_t opcode;
  std::int8_t funct3;  // -1 when unused
  std::int8_t funct7;  // -1 when unused
  CostClass cost;
};

constexpr std::uint8_t kOpLui = 0x37, kOpAuipc = 0x17, kOpJal = 0x6F, kOpJalr = 0x67,
                       kOpBranch = 0x63, kOpLoad = 0x03, kOpStore = 0x23, kOpImm = 0x13,
                       kOpReg = 0x33, kOpFence = 0x0F, kOpSystem = 0x73;

// Indexed by Op.
constexpr std::array<OpInfo, kOpCount> kOps{{
    {Op::Lui, "lui", Format::U, kOpLui, -1, -1, CostClass::Alu},
    {Op::Auipc, "auipc", Format::U, kOpAuipc, -1, -1, CostClass::Alu},
    {Op::Jal, "jal", Format::J, kOpJal, -1, -1, CostClass::Jump},
    {Op::Jalr, "jalr", Format::I, kOpJalr, 0, -1, CostClass::Jump},
    {Op::Beq, "beq", Format::B, kOpBranch, 0, -1, CostClass::BranchNotTaken},
    {Op::Bne, "bne", Format::B, kOpBranch, 1, -1, CostClass::BranchNotTaken},
    {Op::Blt, "blt", Format::B, kOpBranch, 4, -1, CostClass::BranchNotTaken},
    {Op::Bge, "bge", Format::B, kOpBranch, 5, -1, CostClass::BranchNotTaken},
    {Op::Bltu, "bltu", Format::B, kOpBranch, 6, -1, CostClass::BranchNotTaken},
    {Op::Bgeu, "bgeu", Format::B, kOpBranch, 7, -1, CostClass::BranchNotTaken},
    {Op::Lb, "lb", Format::I, kOpLoad, 0, -1, CostClass::Load},
    {Op::Lh, "lh", Format::I, kOpLoad, 1, -1, CostClass::Load},
    {Op::Lw, "lw", Format::I, kOpLoad, 2, -1, CostClass::Load},
    {Op::Lbu, "lbu", Format::I, kOpLoad, 4, -1, CostClass::Load},
    {Op::Lhu, "lhu", Format::I, kOpLoad, 5, -1, CostClass::Load},
    {Op::Sb, "sb", Format::S, kOpStore, 0, -1, CostClass::Store},
    {Op::Sh, "sh", Format::S, kOpStore, 1, -1, CostClass::Store},
    {Op::Sw, "sw", Format::S, kOpStore, 2, -1, CostClass::Store},
    {Op::Addi, "addi", Format::I, kOpImm, 0, -1, CostClass::Alu},
    {Op::Slti, "slti", Format::I, kOpImm, 2, -1, CostClass::Alu},
    {Op::Sltiu, "sltiu", Format::I, kOpImm, 3, -1, CostClass::Alu},
    {Op::Xori, "xori", Format::I, kOpImm, 4, -1, CostClass::Alu},
    {Op::Ori, "ori", Format::I, kOpImm, 6, -1, CostClass::Alu},
    {Op::Andi, "andi", Format::I, kOpImm, 7, -1, CostClass::Alu},
    {Op::Slli, "slli", Format::I, kOpImm, 1, 0x00, CostClass::Alu},
    {Op::Srli, "srli", Format::I, kOpImm, 5, 0x00, CostClass::Alu},
    {Op::Srai, "srai", Format::I, kOpImm, 5, 0x20, CostClass::Alu},
    {Op::Add, "add", Format::R, kOpReg, 0, 0x00, CostClass::Alu},
    {Op::Sub, "sub", Format::R, kOpReg, 0, 0x20, CostClass::Alu},
    {Op::Sll, "sll", Format::R, kOpReg, 1, 0x00, CostClass::Alu},
    {Op::Slt, "slt", Format::R, kOpReg, 2, 0x00, CostClass::Alu},
    {Op::Sltu, "sltu", Format::R, kOpReg, 3, 0x00, CostClass::Alu},
    {Op::Xor, "xor", Format::R, kOpReg, 4, 0x00, CostClass::Alu},
    {Op::Srl, "srl", Format::R, kOpReg, 5, 0x00, CostClass::Alu},
    {Op::Sra, "sra", Format::R, kOpReg, 5, 0x20, CostClass::Alu},
    {Op::Or, "or", Format::R, kOpReg, 6, 0x00, CostClass::Alu},
    {Op::And, "and", Format::R, kOpReg, 7, 0x00, CostClass::Alu},
    {Op::Mul, "mul", Format::R, kOpReg, 0, 0x01, CostClass::Mul},
    {Op::Mulh, "mulh", Format::R, kOpReg, 1, 0x01, CostClass::Mul},
    {Op::Mulhsu, "mulhsu", Format::R, kOpReg, 2, 0x01, CostClass::Mul},
    {Op::Mulhu, "mulhu", Format::R, kOpReg, 3, 0x01, CostClass::Mul},
    {Op::Fence, "fence", Format::I, kOpFence, 0, -1, CostClass::System},
    {Op::Ecall, "ecall", Format::I, kOpSystem, 0, -1, CostClass::System},
    {Op::Ebreak, "ebreak", Format::I, kOpSystem, 0, -1, CostClass::System},
}};

const OpInfo& info(Op op) { return kOps[static_cast<std::size_t>(op)]; }

bool is_shift_imm(Op op) { return op == Op::Slli || op == Op::Srli || op == Op::Srai; }

constexpr std::int32_t sext(std::uint32_t value, int bits) {
  const std::uint32_t m = 1u << (bits - 1);
  value &= (bits == 32) ? 0xFFFF'FFFFu : ((1u << bits) - 1);
  return static_cast<std::int32_t>((value ^ m) - m);
}

constexpr std::uint32_t bits(Word w, int hi, int lo) { return (w >> lo) & ((1u << (hi - lo + 1)) - 1); }

std::optional<Instruction> illegal(Word word, IllegalInstruction* why, const char* reason) {
  if (why) *why = {word, reason};
  return std::nullopt;
}

std::optional<Op> find(std::uint8_t opcode, std::uint32_t funct3, std::int32_t funct7) {
  for (const auto& i : kOps) {
    if (i.opcode != opcode || i.op == Op::Ecall || i.op == Op::Ebreak) continue;
    if (i.funct3 >= 0 && static_cast<std::uint32_t>(i.funct3) != funct3) continue;
    if (i.funct7 >= 0 && i.funct7 != funct7) continue;
    return i.op;
  }
  return std::nullopt;
}

void check_reg(std::uint8_t r, const char* field) {
  if (r > 31) throw EncodeError(std::string(field) + " register out of range");
}

void check_signed(std::int32_t v, int bits_, const char* what) {
  const std::int64_t lo = -(std::int64_t{1} << (bits_ - 1));
  const std::int64_t hi = (std::int64_t{1} << (bits_ - 1)) - 1;
  if (v < lo || v > hi) {
    throw EncodeError(std::string(what) + " immediate " + std::to_string(v) + " does not fit in " +
                      std::to_string(bits_) + " signed bits");
  }
}

}  // namespace

std::string_view mnemonic(Op op) { return info(op).name; }
Format format_of(Op op) { return info(op).format; }
CostClass cost_class(Op op) { return info(op).cost; }

std::optional<Op> op_from_mnemonic(std::string_view name) {
  for (const auto& i : kOps) {
    if (i.name == name) return i.op;
  }
  return std::nullopt;
}

std::string_view to_string(CostClass c) {
  switch (c) {
    case CostClass::Alu: return "alu";
    case CostClass::Mul: return "mul";
    case CostClass::Load: return "load";
    case CostClass::Store: return "store";
    case CostClass::BranchNotTaken: return "branch_not_taken";
    case CostClass::BranchTaken: return "branch_taken";
    case CostClass::Jump: return "jump";
    case CostClass::System: return "system";
  }
  return "?";
}

std::optional<Instruction> decode(Word w, IllegalInstruction* why) {
  if ((w & 0x3) != 0x3) return illegal(w, why, "compressed or zero encoding");
  const auto opcode = static_cast<std::uint8_t>(w & 0x7F);
  const std::uint32_t rd = bits(w, 11, 7);
  const std::uint32_t f3 = bits(w, 14, 12);
  const std::uint32_t rs1 = bits(w, 19, 15);
  const std::uint32_t rs2 = bits(w, 24, 20);
  const auto f7 = static_cast<std::int32_t>(bits(w, 31, 25));

  Instruction in;
  in.rd = static_cast<std::uint8_t>(rd);
  in.rs1 = static_cast<std::uint8_t>(rs1);
  in.rs2 = static_cast<std::uint8_t>(rs2);

  switch (opcode) {
    case kOpLui:
    case kOpAuipc:
      in.op = opcode == kOpLui ? Op::Lui : Op::Auipc;
      in.rs1 = in.rs2 = 0;
      in.imm = static_cast<std::int32_t>(w & 0xFFFF'F000u);
      return in;
    case kOpJal:
      in.op = Op::Jal;
      in.rs1 = in.rs2 = 0;
      in.imm = sext((bits(w, 31, 31) << 20) | (bits(w, 19, 12) << 12) | (bits(w, 20, 20) << 11) |
                        (bits(w, 30, 21) << 1),
                    21);
      return in;
    case kOpJalr:
      if (f3 != 0) return illegal(w, why, "jalr funct3");
      in.op = Op::Jalr;
      in.rs2 = 0;
      in.imm = sext(bits(w, 31, 20), 12);
      return in;
    case kOpBranch: {
      const auto op = find(opcode, f3, -1);
      if (!op) return illegal(w, why, "branch funct3");
      in.op = *op;
      in.rd = 0;
      in.imm = sext((bits(w, 31, 31) << 12) | (bits(w, 7, 7) << 11) | (bits(w, 30, 25) << 5) |
                        (bits(w, 11, 8) << 1),
                    13);
      return in;
    }
    case kOpLoad: {
      const auto op = find(opcode, f3, -1);
      if (!op) return illegal(w, why, "load funct3");
      in.op = *op;
      in.rs2 = 0;
      in.imm = sext(bits(w, 31, 20), 12);
      return in;
    }
    case kOpStore: {
      const auto op = find(opcode, f3, -1);
      if (!op) return illegal(w, why, "store funct3");
      in.op = *op;
      in.rd = 0;
      in.imm = sext((bits(w, 31, 25) << 5) | bits(w, 11, 7), 12);
      return in;
    }
    case kOpImm: {
      in.rs2 = 0;
      if (f3 == 1 || f3 == 5) {
        const auto op = find(opcode, f3, f7);
        if (!op) return illegal(w, why, "shift-immediate funct7");
        in.op = *op;
        in.imm = static_cast<std::int32_t>(rs2);  // shamt is bits 24:20
        return in;
      }
      const auto op = find(opcode, f3, -1);
      if (!op) return illegal(w, why, "op-imm funct3");
      in.op = *op;
      in.imm = sext(bits(w, 31, 20), 12);
      return in;
    }
    case kOpReg: {
      const auto op = find(opcode, f3, f7);
      if (!op) return illegal(w, why, f7 == 1 ? "divide/remainder not supported" : "op funct7");
      in.op = *op;
      in.imm = 0;
      return in;
    }
    case kOpFence:
      if (f3 != 0) return illegal(w, why, "fence.i / misc-mem funct3");
      in.op = Op::Fence;
      in.rs2 = 0;
      in.imm = static_cast<std::int32_t>(bits(w, 31, 20));
      return in;
    case kOpSystem:
      if (w == 0x0000'0073u) return Instruction{Op::Ecall, 0, 0, 0, 0};
      if (w == 0x0010'0073u) return Instruction{Op::Ebreak, 0, 0, 0, 0};
      return illegal(w, why, "CSR and privileged instructions not supported");
    default: return illegal(w, why, "unsupported opcode");
  }
}

Word encode(const Instruction& in) {
  const OpInfo& i = info(in.op);
  check_reg(in.rd, "rd");
  check_reg(in.rs1, "rs1");
  check_reg(in.rs2, "rs2");
  const Word rd = Word{in.rd} << 7;
  const Word rs1 = Word{in.rs1} << 15;
  const Word rs2 = Word{in.rs2} << 20;
  const Word f3 = i.funct3 >= 0 ? Word(i.funct3) << 12 : 0;
  const auto imm = static_cast<Word>(in.imm);

  switch (in.op) {
    case Op::Ecall: return 0x0000'0073u;
    case Op::Ebreak: return 0x0010'0073u;
    case Op::Fence:
      if (in.imm < 0 || in.imm > 0xFFF) throw EncodeError("fence field out of range");
      return (imm << 20) | rs1 | rd | i.opcode;
    default: break;
  }

  switch (i.format) {
    case Format::R: return (Word(i.funct7) << 25) | rs2 | rs1 | f3 | rd | i.opcode;
    case Format::I:
      if (is_shift_imm(in.op)) {
        if (in.imm < 0 || in.imm > 31) throw EncodeError("shift amount out of range");
        return (Word(i.funct7) << 25) | (imm << 20) | rs1 | f3 | rd | i.opcode;
      }
      check_signed(in.imm, 12, std::string(i.name).c_str());
      return ((imm & 0xFFF) << 20) | rs1 | f3 | rd | i.opcode;
    case Format::S:
      check_signed(in.imm, 12, std::string(i.name).c_str());
      return (bits(imm, 11, 5) << 25) | rs2 | rs1 | f3 | (bits(imm, 4, 0) << 7) | i.opcode;
    case Format::B:
      check_signed(in.imm, 13, std::string(i.name).c_str());
      if (in.imm & 1) throw EncodeError("branch offset must be even");
      return (bits(imm, 12, 12) << 31) | (bits(imm, 10, 5) << 25) | rs2 | rs1 | f3 |
             (bits(imm, 4, 1) << 8) | (bits(imm, 11, 11) << 7) | i.opcode;
    case Format::U:
      if (imm & 0xFFF) throw EncodeError("upper immediate must have its low 12 bits clear");
      return imm | rd | i.opcode;
    case Format::J:
      check_signed(in.imm, 21, "jal");
      if (in.imm & 1) throw EncodeError("jump offset must be even");
      return (bits(imm, 20, 20) << 31) | (bits(imm, 10, 1) << 21) | (bits(imm, 11, 11) << 20) |
             (bits(imm, 19, 12) << 12) | rd | i.opcode;
  }
  throw EncodeError("unknown format");
}

namespace {

std::string fence_set(std::uint32_t v) {
  std::string s;
  if (v & 8) s += 'i';
  if (v & 4) s += 'o';
  if (v & 2) s += 'r';
  if (v & 1) s += 'w';
  return s.empty() ? "0" : s;
}

}  // namespace

std::string disassemble(const Instruction& in) {
  const OpInfo& i = info(in.op);
  char buf[64];
  const std::string n(i.name);
  switch (in.op) {
    case Op::Ecall:
    case Op::Ebreak: return n;
    case Op::Fence: {
      const auto raw = static_cast<std::uint32_t>(in.imm);
      std::string s = n;
      if (raw >> 8) s += " fm=" + std::to_string(raw >> 8) + ",";
      return s + " " + fence_set((raw >> 4) & 0xF) + ", " + fence_set(raw & 0xF);
    }
    default: break;
  }
  switch (i.format) {
    case Format::R:
      std::snprintf(buf, sizeof buf, "%s x%u, x%u, x%u", n.c_str(), in.rd, in.rs1, in.rs2);
      break;
    case Format::I:
      if (i.opcode == kOpLoad || in.op == Op::Jalr) {
        std::snprintf(buf, sizeof buf, "%s x%u, %d(x%u)", n.c_str(), in.rd, in.imm, in.rs1);
      } else {
        std::snprintf(buf, sizeof buf, "%s x%u, x%u, %d", n.c_str(), in.rd, in.rs1, in.imm);
      }
      break;
    case Format::S:
      std::snprintf(buf, sizeof buf, "%s x%u, %d(x%u)", n.c_str(), in.rs2, in.imm, in.rs1);
      break;
    case Format::B:
      std::snprintf(buf, sizeof buf, "%s x%u, x%u, %d", n.c_str(), in.rs1, in.rs2, in.imm);
      break;
    case Format::U:
      std::snprintf(buf, sizeof buf, "%s x%u, 0x%X", n.c_str(), in.rd,
                    static_cast<std::uint32_t>(in.imm) >> 12);
      break;
    case Format::J: std::snprintf(buf, sizeof buf, "%s x%u, %d", n.c_str(), in.rd, in.imm); break;
  }
  return buf;
}

std::string listing_line(Address addr, Word word) {
  char head[32];
  std::snprintf(head, sizeof head, "%08X: %08X  ", addr, word);
  IllegalInstruction why;
  if (const auto in = decode(word, &why)) return head + disassemble(*in);
  return std::string(head) + ".word 0x" + [&] {
    char b[16];
    std::snprintf(b, sizeof b, "%08x", word);
    return std::string(b);
  }() + "  # illegal: " + why.reason;
}

}  // namespace rvdsp
