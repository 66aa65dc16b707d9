#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rvdsp/isa.hpp"

namespace rvdsp {

/// Small two-pass assembler for generated kernels. Branch and jump targets
/// are labels; everything else is emitted as a fixed instruction.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(Address origin = map::kInstBase) : origin_(origin) {}

  ProgramBuilder& label(const std::string& name);
  ProgramBuilder& emit(const Instruction& in);

  ProgramBuilder& r(Op op, std::uint8_t rd, std::uint8_t rs1, std::uint8_t rs2) {
    return emit({op, rd, rs1, rs2, 0});
  }
  ProgramBuilder& i(Op op, std::uint8_t rd, std::uint8_t rs1, std::int32_t imm) {
    return emit({op, rd, rs1, 0, imm});
  }
  /// Loads: `op rd, off(base)`.
  ProgramBuilder& load(Op op, std::uint8_t rd, std::int32_t off, std::uint8_t base) {
    return emit({op, rd, base, 0, off});
  }
  /// Stores: `op src, off(base)`.
  ProgramBuilder& store(Op op, std::uint8_t src, std::int32_t off, std::uint8_t base) {
    return emit({op, 0, base, src, off});
  }
  ProgramBuilder& lui(std::uint8_t rd, Word upper) {
    return emit({Op::Lui, rd, 0, 0, static_cast<std::int32_t>(upper & 0xFFFF'F000u)});
  }
  /// Materializes a 32-bit constant with ADDI or LUI(+ADDI).
  ProgramBuilder& li(std::uint8_t rd, Word value);
  ProgramBuilder& mv(std::uint8_t rd, std::uint8_t rs) { return i(Op::Addi, rd, rs, 0); }

  ProgramBuilder& branch(Op op, std::uint8_t rs1, std::uint8_t rs2, const std::string& target);
  ProgramBuilder& jal(std::uint8_t rd, const std::string& target);
  ProgramBuilder& j(const std::string& target) { return jal(0, target); }

  ProgramBuilder& ebreak() { return emit({Op::Ebreak, 0, 0, 0, 0}); }
  ProgramBuilder& ecall() { return emit({Op::Ecall, 0, 0, 0, 0}); }

  Address here() const noexcept { return origin_ + 4 * static_cast<Address>(items_.size()); }
  std::size_t size() const noexcept { return items_.size(); }

  /// Resolves labels and encodes. Throws std::invalid_argument for unknown
  /// or duplicate labels and EncodeError for out-of-range offsets.
  std::vector<Word> assemble() const;

 private:
  struct Item {
    Instruction in;
    std::string target;  // empty when no fixup is needed
  };

  Address origin_;
  std::vector<Item> items_;
  std::map<std::string, Address> labels_;
};

}  // namespace rvdsp
