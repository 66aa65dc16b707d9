#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rvdsp/mem_map.hpp"

namespace rvdsp {

/// RV32I base plus the multiply subset of M (no DIV/REM).
enum class Op : std::uint8_t {
  Lui, Auipc, Jal, Jalr,
  Beq, Bne, Blt, Bge, Bltu, Bgeu,
  Lb, Lh, Lw, Lbu, Lhu,
  Sb, Sh, Sw,
  Addi, Slti, Sltiu, Xori, Ori, Andi, Slli, Srli, Srai,
  Add, Sub, Sll, Slt, Sltu, Xor, Srl, Sra, Or, And,
  Mul, Mulh, Mulhsu, Mulhu,
  Fence, Ecall, Ebreak,
};

inline constexpr std::size_t kOpCount = static_cast<std::size_t>(Op::Ebreak) + 1;

enum class CostClass : std::uint8_t {
  Alu, Mul, Load, Store, BranchNotTaken, BranchTaken, Jump, System,
};
inline constexpr std::size_t kCostClassCount = 8;

enum class Format : std::uint8_t { R, I, S, B, U, J };

std::string_view mnemonic(Op op);
std::string_view to_string(CostClass c);
std::optional<Op> op_from_mnemonic(std::string_view name);
Format format_of(Op op);

/// Static cost class. Branches report BranchNotTaken here; the executing
/// CPU upgrades a taken branch to BranchTaken.
CostClass cost_class(Op op);

/// An instruction in semantic form.
///
/// `imm` conventions: I/S/B/J formats hold the sign-extended immediate
/// (B/J as a byte offset); shifts hold the shift amount; LUI/AUIPC hold the
/// full 32-bit value with the low 12 bits clear; FENCE holds bits 31:20 of
/// the encoding (fm, pred, succ).
struct Instruction {
  Op op = Op::Addi;
  std::uint8_t rd = 0;
  std::uint8_t rs1 = 0;
  std::uint8_t rs2 = 0;
  std::int32_t imm = 0;

  CostClass cost() const { return cost_class(op); }
  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct IllegalInstruction {
  Word word;
  std::string reason;
};

class EncodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Decodes one 32-bit word. Every field that is architecturally fixed for the
/// instruction must match; anything else (F/A/C extensions, custom opcodes,
/// DIV/REM, CSR access) is illegal.
std::optional<Instruction> decode(Word word, IllegalInstruction* why = nullptr);

/// Inverse of decode. Throws EncodeError for out-of-range fields.
Word encode(const Instruction& instr);

std::string disassemble(const Instruction& instr);

/// `ADDR: WORD  MNEMONIC operands`, or `.word` for an illegal word.
std::string listing_line(Address addr, Word word);

namespace reg {
inline constexpr std::uint8_t zero = 0, ra = 1, sp = 2, gp = 3, tp = 4;
inline constexpr std::uint8_t t0 = 5, t1 = 6, t2 = 7;
inline constexpr std::uint8_t s0 = 8, s1 = 9;
inline constexpr std::uint8_t a0 = 10, a1 = 11, a2 = 12, a3 = 13, a4 = 14, a5 = 15, a6 = 16,
                              a7 = 17;
inline constexpr std::uint8_t s2 = 18, s3 = 19, s4 = 20, s5 = 21, s6 = 22, s7 = 23, s8 = 24,
                              s9 = 25, s10 = 26, s11 = 27;
inline constexpr std::uint8_t t3 = 28, t4 = 29, t5 = 30, t6 = 31;
}  // namespace reg

}  // namespace rvdsp
