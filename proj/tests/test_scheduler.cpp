#include <doctest.h>

#include <sstream>

#include "rvdsp/kernels.hpp"
#include "rvdsp/report.hpp"
#include "rvdsp/scenario.hpp"
#include "rvdsp/soc.hpp"
#include "support/harness.hpp"
#include "support/oracle.hpp"

using namespace rvdsp;

namespace {

Scenario conv_scenario(std::uint32_t n, std::uint32_t k, std::uint64_t seed, ScenarioMode mode) {
  Scenario s;
  s.kind = ScenarioKind::Conv;
  s.mode = mode;
  s.placement = Placement::Packed;
  s.n = n;
  s.k = k;
  s.seed = seed;
  return s;
}

// Oracle data in the documented draw order.
std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> draw2(std::uint64_t seed,
                                                                      std::size_t first,
                                                                      std::size_t second) {
  oracle::Rng rng(seed);
  auto a = rng.words(first);
  auto b = rng.words(second);
  return {a, b};
}

}  // namespace

TEST_SUITE("scheduler") {

TEST_CASE("quiescent system only advances the cycle counter") {
  Soc soc;
  const std::uint64_t d0 = soc.sram().digest();
  for (int i = 0; i < 100; ++i) soc.step();
  CHECK(soc.cycle() == 100);
  const CycleReport r = soc.report();
  CHECK(r.total_cycles == 100);
  CHECK(r.sram_accesses == 0);
  CHECK(r.conv.counters.busy_cycles == 0);
  CHECK(soc.sram().digest() == d0);
}

TEST_CASE("testbench run: done follows START by the busy phase") {
  Soc soc;
  const auto [x, h] = draw2(3, 40, 6);
  MemoryTrace trace;
  soc.set_trace(&trace);
  const auto run = harness::conv_testbench(soc, x, h);
  CHECK(run.counters.busy_cycles == oracle::conv_busy(40, 6));
  std::uint64_t start = 0, done = 0;
  for (const auto& rec : trace.records()) {
    if (rec.component != "conv_dsp") continue;
    if (rec.event.rfind("start", 0) == 0) start = rec.cycle;
    if (rec.event.rfind("done", 0) == 0) done = rec.cycle;
  }
  CHECK(start == run.start_cycle);
  CHECK(done - start == oracle::conv_busy(40, 6));
}

TEST_CASE("trace lines use the documented format") {
  const TraceRecord r{42, "conv_dsp", "start N=8 K=2"};
  CHECK(format_trace_line(r) == "cycle 42 | conv_dsp | start N=8 K=2");
  std::ostringstream out;
  StreamTrace t(out);
  t.record(7, "cpu", "retire");
  CHECK(out.str() == "cycle 7 | cpu | retire\n");
}

TEST_CASE("CPU DataMem traffic stretches the busy phase") {
  const std::uint32_t n = 128, k = 8;
  const auto [x, h] = draw2(11, n, k);
  std::uint64_t previous = oracle::conv_busy(n, k);
  for (const std::uint32_t stores : {16u, 64u, 256u}) {
    Soc soc;
    soc.write_data(0x8000, std::span<const std::int32_t>(x));
    soc.write_data(0x8200, std::span<const std::int32_t>(h));
    soc.load_program(kernels::store_traffic(0xC000, stores));
    Conv1dAccelerator& c = soc.conv();
    c.axi_write(conv_reg::kInAddr, 0x8000);
    c.axi_write(conv_reg::kKernAddr, 0x8200);
    c.axi_write(conv_reg::kOutAddr, 0x8400);
    c.axi_write(conv_reg::kInLen, n);
    c.axi_write(conv_reg::kKernLen, k);
    c.axi_write(conv_reg::kControl, control_bits::kStart);
    soc.enable_cpu();
    while (soc.conv().busy()) soc.step();
    CAPTURE(stores);
    const std::uint64_t busy = soc.conv().counters().busy_cycles;
    CHECK(busy > oracle::conv_busy(n, k));
    CHECK(busy > previous);
    CHECK(soc.report().bus[index_of(Requester::ConvDsp)].stalls > 0);
    CHECK(soc.read_data(0x8400, n - k + 1) == oracle::conv(x, h));
    previous = busy;
  }
}

TEST_CASE("both accelerators share the port by priority") {
  Soc soc;
  const auto [x, h] = draw2(8, 32, 4);
  const auto [a, b] = draw2(9, 16, 16);
  soc.write_data(0x8000, std::span<const std::int32_t>(x));
  soc.write_data(0x8100, std::span<const std::int32_t>(h));
  soc.write_data(0x8400, std::span<const std::int32_t>(a));
  soc.write_data(0x8500, std::span<const std::int32_t>(b));
  Conv1dAccelerator& c = soc.conv();
  c.axi_write(conv_reg::kInAddr, 0x8000);
  c.axi_write(conv_reg::kKernAddr, 0x8100);
  c.axi_write(conv_reg::kOutAddr, 0x8200);
  c.axi_write(conv_reg::kInLen, 32);
  c.axi_write(conv_reg::kKernLen, 4);
  DotProductAccelerator& d = soc.dot();
  d.axi_write(dot_reg::kVaAddr, 0x8400);
  d.axi_write(dot_reg::kVbAddr, 0x8500);
  d.axi_write(dot_reg::kLen, 16);
  c.axi_write(conv_reg::kControl, control_bits::kStart);
  d.axi_write(dot_reg::kControl, control_bits::kStart);
  while (soc.conv().busy() || soc.dot().busy()) soc.step();
  CHECK(soc.read_data(0x8200, 29) == oracle::conv(x, h));
  CHECK(soc.dot().result() == oracle::dot(a, b));
  CHECK(soc.conv().counters().busy_cycles == oracle::conv_busy(32, 4));
  CHECK(soc.dot().counters().busy_cycles > oracle::dot_busy(16));
}

TEST_CASE("N=1024 K=16 conv scenario in both modes") {
  const auto [x, h] = draw2(7, 1024, 16);
  const auto want = oracle::conv(x, h);
  for (const ScenarioMode mode : {ScenarioMode::Testbench, ScenarioMode::FullSystem}) {
    const ScenarioResult r = run_scenario(conv_scenario(1024, 16, 7, mode));
    CHECK(r.stop == StopReason::Halted);
    CHECK(r.busy_cycles == 49441);
    CHECK(r.mac_count == 1009u * 16u);
    CHECK(r.output == want);
    CHECK(r.outputs_match());
    CHECK(r.config_write_cycles > 0);
    if (mode == ScenarioMode::FullSystem) {
      CHECK(r.report.cpu.enabled);
      // Polling reads register space, never DataMem.
      CHECK(r.report.bus[index_of(Requester::ConvDsp)].stalls == 0);
    }
  }
}

TEST_CASE("dot scenario L=3") {
  Scenario s;
  s.kind = ScenarioKind::Dot;
  s.len = 3;
  s.a = {1, 2, 3};
  s.b = {4, 5, 6};
  for (const ScenarioMode mode : {ScenarioMode::Testbench, ScenarioMode::FullSystem}) {
    s.mode = mode;
    const ScenarioResult r = run_scenario(s);
    REQUIRE(r.dot_result.has_value());
    CHECK(*r.dot_result == 32);
    CHECK(r.busy_cycles == 10);
  }
}

TEST_CASE("determinism: identical scenarios give identical reports") {
  for (const ScenarioMode mode : {ScenarioMode::Testbench, ScenarioMode::FullSystem}) {
    const Scenario s = conv_scenario(200, 9, 42, mode);
    const ScenarioResult a = run_scenario(s);
    const ScenarioResult b = run_scenario(s);
    CHECK(scenario_report_json(a) == scenario_report_json(b));
    CHECK(a.sram == b.sram);
  }
}

TEST_CASE("conservation: words outside declared buffers are untouched") {
  for (const ScenarioMode mode : {ScenarioMode::Testbench, ScenarioMode::FullSystem}) {
    const ScenarioResult r = run_scenario(conv_scenario(100, 7, 1, mode));
    for (std::size_t i = 0; i < r.sram.size(); ++i) {
      const Address a = map::kDataBase + static_cast<Address>(4 * i);
      bool inside = false;
      for (const Buffer& b : r.buffers) inside |= a >= b.addr && a < b.end();
      if (!inside) REQUIRE(r.sram[i] == 0u);
    }
    CHECK(r.rom_digest_before == r.rom_digest_after);
  }
}

TEST_CASE("CNN layer decomposes into convolution calls") {
  Scenario s;
  s.kind = ScenarioKind::CnnLayer;
  s.cnn = {24, 3, 3, 2};
  s.seed = 17;
  oracle::Rng rng(17);
  std::vector<std::vector<std::int32_t>> in(3);
  for (auto& ch : in) ch = rng.words(24);
  std::vector<std::vector<std::vector<std::int32_t>>> w(2, std::vector<std::vector<std::int32_t>>(3));
  for (auto& k : w) {
    for (auto& ch : k) ch = rng.words(3);
  }
  std::vector<std::uint32_t> want;
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<std::uint32_t> acc(24, 0);
    for (std::size_t c = 0; c < 3; ++c) {
      auto padded = in[c];
      padded.resize(24 + 2, 0);
      const auto y = oracle::conv(padded, w[k][c]);
      for (std::size_t i = 0; i < 24; ++i) acc[i] += y[i];
    }
    want.insert(want.end(), acc.begin(), acc.end());
  }
  for (const ScenarioMode mode : {ScenarioMode::Testbench, ScenarioMode::FullSystem}) {
    s.mode = mode;
    const ScenarioResult r = run_scenario(s);
    CHECK(r.calls == 6);
    CHECK(r.mac_count == 24u * 3u * 3u * 2u);
    CHECK(r.busy_cycles == 6 * oracle::conv_busy(26, 3));
    CHECK(r.output == want);
  }
}

TEST_CASE("dense layer decomposes into dot-product calls") {
  Scenario s;
  s.kind = ScenarioKind::DenseLayer;
  s.dense = {20, 6};
  s.seed = 4;
  oracle::Rng rng(4);
  std::vector<std::vector<std::int32_t>> w(6);
  for (auto& row : w) row = rng.words(20);
  const auto xin = rng.words(20);
  std::vector<std::uint32_t> want;
  for (const auto& row : w) want.push_back(static_cast<std::uint32_t>(oracle::dot(row, xin)));
  for (const ScenarioMode mode : {ScenarioMode::Testbench, ScenarioMode::FullSystem}) {
    s.mode = mode;
    const ScenarioResult r = run_scenario(s);
    CHECK(r.calls == 6);
    CHECK(r.mac_count == 120);
    CHECK(r.busy_cycles == 6 * oracle::dot_busy(20));
    CHECK(r.output == want);
  }
}

TEST_CASE("timeouts are reported, not thrown") {
  Scenario s = conv_scenario(256, 16, 1, ScenarioMode::Testbench);
  s.sim.max_cycles = 500;
  const ScenarioResult r = run_scenario(s);
  CHECK(r.timed_out);
  CHECK(r.stop == StopReason::Timeout);
  CHECK(r.report.total_cycles == 500);
}

TEST_CASE("accelerator errors surface in the result") {
  Scenario s = conv_scenario(64, 8, 1, ScenarioMode::FullSystem);
  s.y_addr = 0x0000'0000;  // ROM: rejected by validation
  CHECK_THROWS_AS(run_scenario(s), ScenarioError);
}

}  // TEST_SUITE
