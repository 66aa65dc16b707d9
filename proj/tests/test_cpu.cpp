#include <doctest.h>

#include <memory>

#include "rvdsp/kernels.hpp"
#include "rvdsp/program.hpp"
#include "rvdsp/report.hpp"
#include "rvdsp/soc.hpp"
#include "support/oracle.hpp"

using namespace rvdsp;
using namespace rvdsp::reg;

namespace {

std::unique_ptr<Soc> run(const ProgramBuilder& p, const SimConfig& cfg = {}) {
  auto soc = std::make_unique<Soc>(cfg);
  soc->load_program(p.assemble());
  soc->enable_cpu();
  soc->run();
  return soc;
}

std::unique_ptr<Soc> run_words(const std::vector<Word>& words) {
  auto soc = std::make_unique<Soc>();
  soc->load_program(words);
  soc->enable_cpu();
  soc->run();
  return soc;
}

Word x(const Soc& s, std::uint8_t r) { return s.cpu().state().regs.read(r); }

}  // namespace

TEST_SUITE("cpu") {

TEST_CASE("default cost table") {
  const CycleCostTable t;
  CHECK(t[CostClass::Load] == 3);
  CHECK(t[CostClass::Store] == 3);
  CHECK(t[CostClass::Alu] == 1);
  CHECK(t[CostClass::Mul] == 1);
  CHECK(t[CostClass::BranchTaken] == 2);
  CHECK(t[CostClass::BranchNotTaken] == 1);
  CHECK(t[CostClass::Jump] == 2);
  CHECK(t[CostClass::System] == 1);
  CycleCostTable u;
  CHECK_THROWS_AS(u.set(CostClass::Alu, 0), std::invalid_argument);
}

TEST_CASE("cycles follow the cost table") {
  ProgramBuilder p;
  p.i(Op::Addi, a0, zero, 1).i(Op::Addi, a1, zero, 2).r(Op::Add, a2, a0, a1);  // 3 ALU
  p.r(Op::Mul, a3, a2, a2);                                                    // 1 MUL
  p.li(s0, 0x8000).store(Op::Sw, a3, 0, s0);                                   // 1 ALU + 1 store
  p.load(Op::Lw, a4, 0, s0);                                                   // 1 load
  p.branch(Op::Beq, a0, a1, "skip");                                           // not taken
  p.branch(Op::Bne, a0, a1, "skip");                                           // taken
  p.i(Op::Addi, a5, zero, 99);
  p.label("skip").jal(zero, "end");                                            // jump
  p.i(Op::Addi, a5, zero, 98);
  p.label("end").ebreak();
  const auto soc = run(p);
  const CpuState& st = soc->cpu().state();
  CHECK(st.halted);
  CHECK(x(*soc, a4) == 9u);
  CHECK(x(*soc, a5) == 0u);
  CHECK(st.retired == 11);
  CHECK(st.cycles == 3 + 1 + 1 + 3 + 3 + 1 + 2 + 2 + 1);
  CHECK(st.class_counts[static_cast<std::size_t>(CostClass::BranchTaken)] == 1);
  CHECK(st.class_counts[static_cast<std::size_t>(CostClass::BranchNotTaken)] == 1);
  CHECK(st.memory_wait_cycles == 0);
  CHECK(soc->report().total_cycles == st.cycles);
}

TEST_CASE("cost table overrides") {
  SimConfig cfg;
  cfg.costs.set(CostClass::Mul, 4);
  cfg.costs.set(CostClass::Load, 5);
  ProgramBuilder p;
  p.r(Op::Mul, a0, a0, a0).li(s0, 0x8000).load(Op::Lw, a1, 0, s0).ebreak();
  const auto soc = run(p, cfg);
  CHECK(soc->cpu().state().cycles == 4 + 1 + 5 + 1);
}

TEST_CASE("register-space loads take the load cost") {
  ProgramBuilder p;
  p.li(s0, map::kConvBase).load(Op::Lw, a0, conv_reg::kStatus, s0).ebreak();
  const auto soc = run(p);
  CHECK(soc->cpu().state().cycles == 1 + 3 + 1);
}

TEST_CASE("ALU and multiply semantics") {
  oracle::Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto va = static_cast<Word>(rng.next());
    const auto vb = static_cast<Word>(rng.next());
    ProgramBuilder p;
    p.li(a0, va).li(a1, vb);
    const Op ops[] = {Op::Add, Op::Sub,  Op::Sll,  Op::Slt,    Op::Sltu,  Op::Xor, Op::Srl,
                      Op::Sra, Op::Or,   Op::And,  Op::Mul,    Op::Mulh,  Op::Mulhsu, Op::Mulhu};
    std::uint8_t rd = t0;
    for (const Op op : ops) {
      p.r(op, rd, a0, a1);
      rd = rd == t2 ? s2 : static_cast<std::uint8_t>(rd + 1);
    }
    p.ebreak();
    const auto soc = run(p);
    const auto sa = static_cast<std::int32_t>(va);
    const auto sb = static_cast<std::int32_t>(vb);
    const unsigned sh = vb & 31;
    const Word want[] = {
        va + vb,
        va - vb,
        va << sh,
        sa < sb ? 1u : 0u,
        va < vb ? 1u : 0u,
        va ^ vb,
        va >> sh,
        static_cast<Word>(sa >> sh),
        va | vb,
        va & vb,
        static_cast<Word>(static_cast<std::uint64_t>(std::int64_t{sa} * sb)),
        static_cast<Word>(static_cast<std::uint64_t>(std::int64_t{sa} * sb) >> 32),
        static_cast<Word>(static_cast<std::uint64_t>(std::int64_t{sa} * std::int64_t{vb}) >> 32),
        static_cast<Word>((std::uint64_t{va} * vb) >> 32),
    };
    rd = t0;
    for (std::size_t i = 0; i < std::size(ops); ++i) {
      CAPTURE(mnemonic(ops[i]));
      REQUIRE(x(*soc, rd) == want[i]);
      rd = rd == t2 ? s2 : static_cast<std::uint8_t>(rd + 1);
    }
  }
}

TEST_CASE("immediate forms, LUI and AUIPC") {
  ProgramBuilder p;
  p.i(Op::Addi, a0, zero, -5);
  p.i(Op::Slti, a1, a0, -4).i(Op::Sltiu, a2, a0, 1).i(Op::Xori, a3, a0, -1);
  p.i(Op::Ori, a4, zero, 0x555).i(Op::Andi, a5, a0, 0xF0);
  p.i(Op::Slli, a6, a0, 4).i(Op::Srli, a7, a0, 28).i(Op::Srai, s2, a0, 1);
  p.lui(s3, 0xFFFFF000);
  p.emit({Op::Auipc, s4, 0, 0, 0x1000});  // at pc 0x28
  p.i(Op::Addi, zero, zero, 7);
  p.ebreak();
  const auto soc = run(p);
  CHECK(x(*soc, a1) == 1u);
  CHECK(x(*soc, a2) == 0u);
  CHECK(x(*soc, a3) == 4u);
  CHECK(x(*soc, a4) == 0x555u);
  CHECK(x(*soc, a5) == 0xF0u);
  CHECK(x(*soc, a6) == 0xFFFF'FFB0u);
  CHECK(x(*soc, a7) == 0xFu);
  CHECK(x(*soc, s2) == 0xFFFF'FFFDu);
  CHECK(x(*soc, s3) == 0xFFFF'F000u);
  CHECK(x(*soc, s4) == 0x1028u);
  CHECK(x(*soc, zero) == 0u);
}

TEST_CASE("sub-word loads and stores") {
  ProgramBuilder p;
  p.li(s0, 0x8100).li(a0, 0x8081'82F3);
  p.store(Op::Sw, a0, 0, s0);
  p.li(a1, 0x7F).store(Op::Sb, a1, 1, s0);      // 0x80817FF3
  p.li(a1, 0xBEEF).store(Op::Sh, a1, 6, s0);    // upper half of word 1
  p.load(Op::Lb, t0, 0, s0).load(Op::Lbu, t1, 0, s0);
  p.load(Op::Lh, t2, 2, s0).load(Op::Lhu, s2, 2, s0);
  p.load(Op::Lb, s3, 1, s0).load(Op::Lw, s4, 0, s0).load(Op::Lw, s5, 4, s0);
  p.ebreak();
  const auto soc = run(p);
  CHECK(x(*soc, t0) == 0xFFFF'FFF3u);
  CHECK(x(*soc, t1) == 0xF3u);
  CHECK(x(*soc, t2) == 0xFFFF'8081u);
  CHECK(x(*soc, s2) == 0x8081u);
  CHECK(x(*soc, s3) == 0x7Fu);
  CHECK(x(*soc, s4) == 0x8081'7FF3u);
  CHECK(x(*soc, s5) == 0xBEEF'0000u);
}

TEST_CASE("JAL and JALR link registers") {
  ProgramBuilder p;
  p.jal(ra, "f");   // 0x00
  p.ebreak();       // 0x04
  p.label("f");
  p.i(Op::Addi, a0, ra, 0);  // 0x08
  p.emit({Op::Jalr, t0, ra, 0, 0});
  const auto soc = run(p);
  CHECK(x(*soc, a0) == 4u);
  CHECK(x(*soc, t0) == 0x10u);
  CHECK(soc->cpu().state().halted);
}

TEST_CASE("ECALL writes a0 to the mailbox and halts") {
  ProgramBuilder p;
  p.li(a0, 0x1234'5678).ecall().i(Op::Addi, a1, zero, 1);
  const auto soc = run(p);
  CHECK(soc->cpu().state().halted);
  CHECK(soc->read_data(map::kSyscallMailbox, 1)[0] == 0x1234'5678u);
  CHECK(x(*soc, a1) == 0u);
}

TEST_CASE("faults") {
  struct Row {
    const char* name;
    std::vector<Word> program;
    FaultKind kind;
  };
  auto prog = [](auto build) {
    ProgramBuilder p;
    build(p);
    return p.assemble();
  };
  const Row rows[] = {
      {"illegal", {0x0235'4533}, FaultKind::IllegalInstruction},
      {"zero word", {0}, FaultKind::IllegalInstruction},
      {"misaligned lw", prog([](ProgramBuilder& p) { p.li(s0, 0x8002).load(Op::Lw, a0, 0, s0); }),
       FaultKind::Misaligned},
      {"misaligned lh", prog([](ProgramBuilder& p) { p.li(s0, 0x8001).load(Op::Lh, a0, 0, s0); }),
       FaultKind::Misaligned},
      {"store to ROM", prog([](ProgramBuilder& p) { p.store(Op::Sw, a0, 0x100, zero); }),
       FaultKind::StoreFault},
      {"load unmapped", prog([](ProgramBuilder& p) { p.li(s0, 0x20000).load(Op::Lw, a0, 0, s0); }),
       FaultKind::LoadFault},
      {"fetch from DataMem", prog([](ProgramBuilder& p) { p.li(s0, 0x8000).emit({Op::Jalr, 0, s0, 0, 0}); }),
       FaultKind::FetchFault},
  };
  for (const Row& r : rows) {
    const std::string name = r.name;
    CAPTURE(name);
    const auto soc = run_words(r.program);
    const CpuState& st = soc->cpu().state();
    REQUIRE(st.fault.has_value());
    CHECK(st.fault->kind == r.kind);
    CHECK_FALSE(st.fault->cause.empty());
    CHECK_FALSE(soc->cpu().running());
  }
  const auto soc = run_words({0x0235'4533});
  CHECK(soc->cpu().state().cycles == 1);
  CHECK(soc->cpu().state().fault->pc == 0u);
  CHECK(soc->cpu().state().fault->word == 0x0235'4533u);
}

TEST_CASE("runaway program times out") {
  SimConfig cfg;
  cfg.max_cycles = 1000;
  ProgramBuilder p;
  p.label("loop").j("loop");
  const auto soc = run(p, cfg);
  CHECK(soc->cycle() == 1000);
  CHECK(soc->cpu().running());
}

TEST_CASE("program builder") {
  ProgramBuilder p;
  p.li(a0, 5).li(a1, 0x12345).li(a2, 0xFFFF'F800).li(a3, 0x7FFF'F800);
  CHECK(p.size() == 1 + 2 + 1 + 2);
  p.ebreak();
  const auto soc = run(p);
  CHECK(x(*soc, a0) == 5u);
  CHECK(x(*soc, a1) == 0x12345u);
  CHECK(x(*soc, a2) == 0xFFFF'F800u);
  CHECK(x(*soc, a3) == 0x7FFF'F800u);

  ProgramBuilder bad;
  bad.j("nowhere");
  CHECK_THROWS_AS(bad.assemble(), std::invalid_argument);
  ProgramBuilder dup;
  dup.label("a");
  CHECK_THROWS_AS(dup.label("a"), std::invalid_argument);
}

TEST_CASE("software convolution kernel") {
  for (const auto& [n, k] : {std::pair{64u, 8u}, {17u, 5u}, {9u, 1u}, {12u, 12u}, {40u, 7u}}) {
    CAPTURE(n);
    CAPTURE(k);
    oracle::Rng rng(n * 131 + k);
    const auto xs = rng.words(n);
    const auto hs = rng.words(k);
    const ConvConfig cfg{0x8000, 0x8000 + 4 * n, 0x8000 + 4 * (n + k), n, k};
    Soc soc;
    soc.write_data(cfg.in_addr, std::span<const std::int32_t>(xs));
    soc.write_data(cfg.kern_addr, std::span<const std::int32_t>(hs));
    soc.load_program(kernels::software_conv(cfg));
    soc.enable_cpu();
    REQUIRE(soc.run() == StopReason::Halted);
    CHECK(soc.read_data(cfg.out_addr, n - k + 1) == oracle::conv(xs, hs));
  }
}

TEST_CASE("deterministic replay") {
  auto once = [] {
    oracle::Rng rng(5);
    const auto xs = rng.words(64);
    const auto hs = rng.words(8);
    Soc soc;
    soc.write_data(0x8000, std::span<const std::int32_t>(xs));
    soc.write_data(0x8100, std::span<const std::int32_t>(hs));
    soc.load_program(kernels::software_conv({0x8000, 0x8100, 0x8200, 64, 8}));
    soc.enable_cpu();
    soc.run();
    return std::pair{cycle_report_json(soc.report()), soc.sram().digest()};
  };
  CHECK(once() == once());
}

}  // TEST_SUITE
