#include "rvdsp/program.hpp"

#include <stdexcept>

namespace rvdsp {

ProgramBuilder& ProgramBuilder::label(const std::string& name) {
  if (!labels_.emplace(name, here()).second) {
    throw std::invalid_argument("duplicate label '" + name + "'");
  }
  return *this;
}

ProgramBuilder& ProgramBuilder::emit(const Instruction& in) {
  items_.push_back({in, {}});
  return *this;
}

ProgramBuilder& ProgramBuilder::li(std::uint8_t rd, Word value) {
  const auto v = static_cast<std::int32_t>(value);
  if (v >= -2048 && v <= 2047) return i(Op::Addi, rd, 0, v);
  const Word upper = (value + 0x800u) & 0xFFFF'F000u;
  const auto lower = static_cast<std::int32_t>(value - upper);
  lui(rd, upper);
  if (lower != 0) i(Op::Addi, rd, rd, lower);
  return *this;
}

ProgramBuilder& ProgramBuilder::branch(Op op, std::uint8_t rs1, std::uint8_t rs2,
                                       const std::string& target) {
  if (format_of(op) != Format::B) throw std::invalid_argument("not a branch op");
  items_.push_back({{op, 0, rs1, rs2, 0}, target});
  return *this;
}

ProgramBuilder& ProgramBuilder::jal(std::uint8_t rd, const std::string& target) {
  items_.push_back({{Op::Jal, rd, 0, 0, 0}, target});
  return *this;
}

std::vector<Word> ProgramBuilder::assemble() const {
  std::vector<Word> out;
  out.reserve(items_.size());
  Address pc = origin_;
  for (const Item& item : items_) {
    Instruction in = item.in;
    if (!item.target.empty()) {
      const auto it = labels_.find(item.target);
      if (it == labels_.end()) throw std::invalid_argument("undefined label '" + item.target + "'");
      in.imm = static_cast<std::int32_t>(it->second - pc);
    }
    out.push_back(encode(in));
    pc += 4;
  }
  return out;
}

}  // namespace rvdsp
