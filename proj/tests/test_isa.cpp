#include <doctest.h>

#include <cstring>
#include <string>

#include "rvdsp/isa.hpp"
#include "support/oracle.hpp"

using namespace rvdsp;

namespace {

// Produced by `clang --target=riscv32 -march=rv32im -c` from the text column.
struct Frozen {
  const char* text;
  Word word;
};
constexpr Frozen kReference[] = {
    {"lui x5, 0xFFFFF", 0xFFFFF2B7u},
    {"lui x31, 0x1", 0x00001FB7u},
    {"auipc x10, 0x80000", 0x80000517u},
    {"auipc x1, 0x0", 0x00000097u},
    {"jal x1, -4", 0xFFDFF0EFu},
    {"jal x0, 1048574", 0x7FFFF06Fu},
    {"jal x2, -1048576", 0x8000016Fu},
    {"jalr x1, 0(x5)", 0x000280E7u},
    {"jalr x0, -2048(x31)", 0x800F8067u},
    {"beq x1, x2, 8", 0x00208463u},
    {"bne x10, x0, -4096", 0x80051063u},
    {"blt x3, x4, 4094", 0x7E41CFE3u},
    {"bge x5, x6, -2", 0xFE62DFE3u},
    {"bltu x7, x8, 16", 0x0083E863u},
    {"bgeu x9, x10, -256", 0xF0A4F0E3u},
    {"lb x1, -1(x2)", 0xFFF10083u},
    {"lh x3, 2047(x4)", 0x7FF21183u},
    {"lw x2, 0(x3)", 0x0001A103u},
    {"lbu x5, -2048(x6)", 0x80034283u},
    {"lhu x7, 100(x8)", 0x06445383u},
    {"sb x1, -1(x2)", 0xFE110FA3u},
    {"sh x3, 2047(x4)", 0x7E321FA3u},
    {"sw x2, 0(x3)", 0x0021A023u},
    {"sw x31, -2048(x30)", 0x81FF2023u},
    {"addi x1, x0, 5", 0x00500093u},
    {"addi x0, x0, 0", 0x00000013u},
    {"addi x31, x31, -1", 0xFFFF8F93u},
    {"slti x1, x2, -2048", 0x80012093u},
    {"sltiu x3, x4, 2047", 0x7FF23193u},
    {"xori x5, x6, -1", 0xFFF34293u},
    {"ori x7, x8, 1365", 0x55546393u},
    {"andi x9, x10, 255", 0x0FF57493u},
    {"slli x1, x2, 31", 0x01F11093u},
    {"srli x3, x4, 1", 0x00125193u},
    {"srai x5, x6, 17", 0x41135293u},
    {"add x1, x2, x3", 0x003100B3u},
    {"sub x4, x5, x6", 0x40628233u},
    {"sll x7, x8, x9", 0x009413B3u},
    {"slt x10, x11, x12", 0x00C5A533u},
    {"sltu x13, x14, x15", 0x00F736B3u},
    {"xor x16, x17, x18", 0x0128C833u},
    {"srl x19, x20, x21", 0x015A59B3u},
    {"sra x22, x23, x24", 0x418BDB33u},
    {"or x25, x26, x27", 0x01BD6CB3u},
    {"and x28, x29, x30", 0x01EEFE33u},
    {"mul x1, x2, x3", 0x023100B3u},
    {"mulh x31, x30, x29", 0x03DF1FB3u},
    {"mulhsu x4, x5, x6", 0x0262A233u},
    {"mulhu x7, x8, x9", 0x029433B3u},
    {"fence rw, rw", 0x0330000Fu},
    {"fence iorw, iorw", 0x0FF0000Fu},
    {"fence o, i", 0x0480000Fu},
    {"fence w, r", 0x0120000Fu},
    {"ecall", 0x00000073u},
    {"ebreak", 0x00100073u},
};

// A random instruction with every field in range for its format.
Instruction random_instruction(oracle::Rng& rng) {
  Instruction in;
  in.op = static_cast<Op>(rng.below(kOpCount));
  const auto reg5 = [&] { return static_cast<std::uint8_t>(rng.below(32)); };
  const auto simm = [&](int bits) {
    return static_cast<std::int32_t>(rng.below(1u << bits)) - (1 << (bits - 1));
  };
  switch (in.op) {
    case Op::Ecall:
    case Op::Ebreak: return in;
    case Op::Fence: in.imm = static_cast<std::int32_t>(rng.below(256)); return in;
    default: break;
  }
  switch (format_of(in.op)) {
    case Format::R: in.rd = reg5(); in.rs1 = reg5(); in.rs2 = reg5(); break;
    case Format::I:
      in.rd = reg5();
      in.rs1 = reg5();
      in.imm = (in.op == Op::Slli || in.op == Op::Srli || in.op == Op::Srai)
                   ? static_cast<std::int32_t>(rng.below(32))
                   : simm(12);
      break;
    case Format::S: in.rs1 = reg5(); in.rs2 = reg5(); in.imm = simm(12); break;
    case Format::B: in.rs1 = reg5(); in.rs2 = reg5(); in.imm = simm(12) * 2; break;
    case Format::U: in.rd = reg5(); in.imm = static_cast<std::int32_t>(rng.next() & 0xFFFF'F000u); break;
    case Format::J: in.rd = reg5(); in.imm = simm(20) * 2; break;
  }
  return in;
}

// Field packing from the oracle, independent of encode().
Word pack(const Instruction& in) {
  using namespace oracle;
  switch (in.op) {
    case Op::Lui: return u_type(static_cast<Word>(in.imm) >> 12, in.rd, 0x37);
    case Op::Auipc: return u_type(static_cast<Word>(in.imm) >> 12, in.rd, 0x17);
    case Op::Jal: return j_type(in.imm, in.rd);
    case Op::Jalr: return i_type(in.imm, in.rs1, 0, in.rd, 0x67);
    case Op::Beq: return b_type(in.imm, in.rs2, in.rs1, 0);
    case Op::Bne: return b_type(in.imm, in.rs2, in.rs1, 1);
    case Op::Blt: return b_type(in.imm, in.rs2, in.rs1, 4);
    case Op::Bge: return b_type(in.imm, in.rs2, in.rs1, 5);
    case Op::Bltu: return b_type(in.imm, in.rs2, in.rs1, 6);
    case Op::Bgeu: return b_type(in.imm, in.rs2, in.rs1, 7);
    case Op::Lb: return i_type(in.imm, in.rs1, 0, in.rd, 0x03);
    case Op::Lh: return i_type(in.imm, in.rs1, 1, in.rd, 0x03);
    case Op::Lw: return i_type(in.imm, in.rs1, 2, in.rd, 0x03);
    case Op::Lbu: return i_type(in.imm, in.rs1, 4, in.rd, 0x03);
    case Op::Lhu: return i_type(in.imm, in.rs1, 5, in.rd, 0x03);
    case Op::Sb: return s_type(in.imm, in.rs2, in.rs1, 0, 0x23);
    case Op::Sh: return s_type(in.imm, in.rs2, in.rs1, 1, 0x23);
    case Op::Sw: return s_type(in.imm, in.rs2, in.rs1, 2, 0x23);
    case Op::Addi: return i_type(in.imm, in.rs1, 0, in.rd, 0x13);
    case Op::Slti: return i_type(in.imm, in.rs1, 2, in.rd, 0x13);
    case Op::Sltiu: return i_type(in.imm, in.rs1, 3, in.rd, 0x13);
    case Op::Xori: return i_type(in.imm, in.rs1, 4, in.rd, 0x13);
    case Op::Ori: return i_type(in.imm, in.rs1, 6, in.rd, 0x13);
    case Op::Andi: return i_type(in.imm, in.rs1, 7, in.rd, 0x13);
    case Op::Slli: return i_type(in.imm, in.rs1, 1, in.rd, 0x13);
    case Op::Srli: return i_type(in.imm, in.rs1, 5, in.rd, 0x13);
    case Op::Srai: return i_type(in.imm | 0x400, in.rs1, 5, in.rd, 0x13);
    case Op::Add: return r_type(0, in.rs2, in.rs1, 0, in.rd, 0x33);
    case Op::Sub: return r_type(0x20, in.rs2, in.rs1, 0, in.rd, 0x33);
    case Op::Sll: return r_type(0, in.rs2, in.rs1, 1, in.rd, 0x33);
    case Op::Slt: return r_type(0, in.rs2, in.rs1, 2, in.rd, 0x33);
    case Op::Sltu: return r_type(0, in.rs2, in.rs1, 3, in.rd, 0x33);
    case Op::Xor: return r_type(0, in.rs2, in.rs1, 4, in.rd, 0x33);
    case Op::Srl: return r_type(0, in.rs2, in.rs1, 5, in.rd, 0x33);
    case Op::Sra: return r_type(0x20, in.rs2, in.rs1, 5, in.rd, 0x33);
    case Op::Or: return r_type(0, in.rs2, in.rs1, 6, in.rd, 0x33);
    case Op::And: return r_type(0, in.rs2, in.rs1, 7, in.rd, 0x33);
    case Op::Mul: return r_type(1, in.rs2, in.rs1, 0, in.rd, 0x33);
    case Op::Mulh: return r_type(1, in.rs2, in.rs1, 1, in.rd, 0x33);
    case Op::Mulhsu: return r_type(1, in.rs2, in.rs1, 2, in.rd, 0x33);
    case Op::Mulhu: return r_type(1, in.rs2, in.rs1, 3, in.rd, 0x33);
    case Op::Fence: return (static_cast<Word>(in.imm) & 0xFFF) << 20 | 0x0F;
    case Op::Ecall: return 0x73;
    case Op::Ebreak: return 0x0010'0073;
  }
  return 0;
}

}  // namespace

TEST_SUITE("isa") {

TEST_CASE("frozen assembler listing") {
  for (const Frozen& f : kReference) {
    CAPTURE(f.text);
    IllegalInstruction why;
    const auto in = decode(f.word, &why);
    REQUIRE_MESSAGE(in.has_value(), why.reason);
    CHECK(disassemble(*in) == f.text);
    CHECK(encode(*in) == f.word);
  }
}

TEST_CASE("every mnemonic is covered by the frozen listing") {
  for (std::size_t i = 0; i < kOpCount; ++i) {
    const std::string name(mnemonic(static_cast<Op>(i)));
    bool seen = false;
    for (const Frozen& f : kReference) {
      const std::string t = f.text;
      seen |= t.rfind(name + " ", 0) == 0 || t == name;
    }
    CHECK_MESSAGE(seen, name);
    CHECK(op_from_mnemonic(name) == static_cast<Op>(i));
  }
}

TEST_CASE("illegal encodings") {
  struct Row {
    Word word;
    const char* why;
  };
  const Row rows[] = {
      {0x0000'0000, "compressed"},
      {0x0000'4501, "compressed"},
      {0x0235'4533, "divide"},        // div a0, a0, gp
      {0x0235'6533, "divide"},        // rem
      {0x3000'2573, "CSR"},           // csrr a0, mstatus
      {0x0000'0007, "opcode"},        // flw
      {0x4001'1093, "shift"},         // slli with funct7 0x20
      {0x0000'2067, "jalr"},          // jalr funct3 = 2
      {0x0000'3003, "load"},          // ld on RV32
      {0x0020'0073, "privileged"},    // uret
  };
  for (const Row& r : rows) {
    CAPTURE(r.word);
    IllegalInstruction why;
    CHECK_FALSE(decode(r.word, &why).has_value());
    CHECK(why.word == r.word);
    std::string lower = why.reason;
    for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    std::string want = r.why;
    for (auto& ch : want) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    CHECK_MESSAGE(lower.find(want) != std::string::npos, why.reason);
  }
}

TEST_CASE("encode range checks") {
  CHECK_THROWS_AS(encode({Op::Addi, 1, 0, 0, 2048}), EncodeError);
  CHECK_THROWS_AS(encode({Op::Addi, 32, 0, 0, 0}), EncodeError);
  CHECK_THROWS_AS(encode({Op::Beq, 0, 1, 2, 3}), EncodeError);
  CHECK_THROWS_AS(encode({Op::Beq, 0, 1, 2, 4096}), EncodeError);
  CHECK_THROWS_AS(encode({Op::Jal, 1, 0, 0, 1 << 20}), EncodeError);
  CHECK_THROWS_AS(encode({Op::Slli, 1, 1, 0, 32}), EncodeError);
  CHECK_THROWS_AS(encode({Op::Lui, 1, 0, 0, 0x123}), EncodeError);
  CHECK_NOTHROW(encode({Op::Beq, 0, 1, 2, -4096}));
}

TEST_CASE("listing lines") {
  CHECK(listing_line(0x10, 0x0050'0093) == "00000010: 00500093  addi x1, x0, 5");
  CHECK(listing_line(0x14, 0x0235'4533).rfind("00000014: 02354533  .word 0x02354533  # illegal: ", 0) == 0);
}

TEST_CASE("cost classes") {
  CHECK(cost_class(Op::Lw) == CostClass::Load);
  CHECK(cost_class(Op::Sb) == CostClass::Store);
  CHECK(cost_class(Op::Mulhu) == CostClass::Mul);
  CHECK(cost_class(Op::Bgeu) == CostClass::BranchNotTaken);
  CHECK(cost_class(Op::Jalr) == CostClass::Jump);
  CHECK(cost_class(Op::Lui) == CostClass::Alu);
  CHECK(cost_class(Op::Ebreak) == CostClass::System);
}

TEST_CASE("random instructions round trip") {
  oracle::Rng rng(0x5EED);
  for (int i = 0; i < 10000; ++i) {
    const Instruction in = random_instruction(rng);
    const Word w = encode(in);
    REQUIRE(w == pack(in));
    const auto back = decode(w);
    REQUIRE(back.has_value());
    REQUIRE(*back == in);
  }
}

TEST_CASE("random words: decode then encode is the identity") {
  oracle::Rng rng(77);
  int legal = 0;
  for (int i = 0; i < 200000; ++i) {
    const auto w = static_cast<Word>(rng.next());
    if (const auto in = decode(w)) {
      ++legal;
      REQUIRE(encode(*in) == w);
    }
  }
  CHECK(legal > 1000);
}

}  // TEST_SUITE
