#include "rvdsp/kernels.hpp"

#include <stdexcept>

namespace rvdsp::kernels {

using namespace reg;

std::vector<Word> software_conv(const ConvConfig& cfg) {
  if (cfg.kern_len == 0 || cfg.in_len < cfg.kern_len) {
    throw std::invalid_argument("software_conv: need 1 <= K <= N");
  }
  const auto outputs = static_cast<std::uint32_t>(cfg.outputs());
  const std::uint32_t pairs = cfg.kern_len / 2;
  const bool odd = (cfg.kern_len % 2) != 0;

  ProgramBuilder p;
  p.li(a0, cfg.in_addr);                       // x + 4i
  p.li(a1, cfg.kern_addr);                     // h
  p.li(a2, cfg.out_addr);                      // y + 4i
  p.li(s1, cfg.out_addr + 4 * outputs);        // y end
  p.li(s3, cfg.kern_addr + 8 * pairs);         // end of the paired taps

  p.label("outer");
  p.i(Op::Addi, t0, zero, 0);
  p.mv(t1, a0);
  p.mv(t2, a1);
  if (pairs > 0) {
    p.label("taps");
    p.load(Op::Lw, t3, 0, t1).load(Op::Lw, t4, 0, t2);
    p.r(Op::Mul, t3, t3, t4).r(Op::Add, t0, t0, t3);
    p.load(Op::Lw, t5, 4, t1).load(Op::Lw, t6, 4, t2);
    p.r(Op::Mul, t5, t5, t6).r(Op::Add, t0, t0, t5);
    p.i(Op::Addi, t1, t1, 8).i(Op::Addi, t2, t2, 8);
    p.branch(Op::Bne, t2, s3, "taps");
  }
  if (odd) {
    p.load(Op::Lw, t3, 0, t1).load(Op::Lw, t4, 0, t2);
    p.r(Op::Mul, t3, t3, t4).r(Op::Add, t0, t0, t3);
  }
  p.store(Op::Sw, t0, 0, a2);
  p.i(Op::Addi, a2, a2, 4).i(Op::Addi, a0, a0, 4);
  p.branch(Op::Bne, a2, s1, "outer");
  p.ebreak();
  return p.assemble();
}

void emit_driver_prologue(ProgramBuilder& p) {
  p.li(kConvBaseReg, map::kConvBase);
  p.li(kDotBaseReg, map::kDotBase);
}

namespace {

void write_reg(ProgramBuilder& p, std::uint8_t base, std::uint32_t offset, Word value) {
  p.li(t0, value);
  p.store(Op::Sw, t0, static_cast<std::int32_t>(offset), base);
}

Word control_word(bool int_en) {
  return control_bits::kStart | (int_en ? control_bits::kIntEn : 0);
}

}  // namespace

void emit_conv_call(ProgramBuilder& p, const ConvConfig& cfg, bool int_en, const std::string& tag) {
  const auto b = kConvBaseReg;
  write_reg(p, b, conv_reg::kInAddr, cfg.in_addr);
  write_reg(p, b, conv_reg::kKernAddr, cfg.kern_addr);
  write_reg(p, b, conv_reg::kOutAddr, cfg.out_addr);
  write_reg(p, b, conv_reg::kInLen, cfg.in_len);
  write_reg(p, b, conv_reg::kKernLen, cfg.kern_len);
  write_reg(p, b, conv_reg::kControl, control_word(int_en));
  p.label(tag + ".poll");
  p.load(Op::Lw, a0, conv_reg::kStatus, b);
  p.i(Op::Andi, t1, a0, status_bits::kDone);
  p.branch(Op::Beq, t1, zero, tag + ".poll");
  write_reg(p, b, conv_reg::kIrqClear, 1);
}

void emit_dot_call(ProgramBuilder& p, const DotConfig& cfg, bool int_en, const std::string& tag) {
  const auto b = kDotBaseReg;
  write_reg(p, b, dot_reg::kVaAddr, cfg.va_addr);
  write_reg(p, b, dot_reg::kVbAddr, cfg.vb_addr);
  write_reg(p, b, dot_reg::kLen, cfg.len);
  write_reg(p, b, dot_reg::kControl, control_word(int_en));
  p.label(tag + ".poll");
  p.load(Op::Lw, a2, dot_reg::kStatus, b);
  p.i(Op::Andi, t1, a2, status_bits::kDone);
  p.branch(Op::Beq, t1, zero, tag + ".poll");
  p.load(Op::Lw, a0, dot_reg::kResultLo, b);
  p.load(Op::Lw, a1, dot_reg::kResultHi, b);
  write_reg(p, b, dot_reg::kIrqClear, 1);
}

void emit_accumulate(ProgramBuilder& p, Address dst, Address src, std::uint32_t words,
                     const std::string& tag) {
  if (words == 0) return;
  p.li(t2, dst);
  p.li(t3, src);
  p.li(t4, dst + 4 * words);
  p.label(tag + ".acc");
  p.load(Op::Lw, t5, 0, t2).load(Op::Lw, t6, 0, t3);
  p.r(Op::Add, t5, t5, t6);
  p.store(Op::Sw, t5, 0, t2);
  p.i(Op::Addi, t2, t2, 4).i(Op::Addi, t3, t3, 4);
  p.branch(Op::Bne, t2, t4, tag + ".acc");
}

std::vector<Word> accel_conv(const ConvConfig& cfg, bool int_en) {
  ProgramBuilder p;
  emit_driver_prologue(p);
  emit_conv_call(p, cfg, int_en, "conv");
  p.ebreak();
  return p.assemble();
}

std::vector<Word> accel_dot(const DotConfig& cfg, bool int_en) {
  ProgramBuilder p;
  emit_driver_prologue(p);
  emit_dot_call(p, cfg, int_en, "dot");
  p.ebreak();
  return p.assemble();
}

std::vector<Word> store_traffic(Address base, std::uint32_t words) {
  ProgramBuilder p;
  p.li(a0, base);
  p.li(a1, base + 4 * words);
  if (words > 0) {
    p.label("loop");
    p.store(Op::Sw, t0, 0, a0);
    p.i(Op::Addi, a0, a0, 4).i(Op::Addi, t0, t0, 1);
    p.branch(Op::Bne, a0, a1, "loop");
  }
  p.ebreak();
  return p.assemble();
}

}  // namespace rvdsp::kernels
