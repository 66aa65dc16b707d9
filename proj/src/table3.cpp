#include "rvdsp/table3.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rvdsp {

bool Table3Report::mismatch() const noexcept {
  for (const auto& c : checks) {
    if (!c.ok) return true;
  }
  return false;
}

std::optional<SpeedupExpectation> expected_speedup(std::uint32_t k) {
  if (k == 16) return SpeedupExpectation{3.365, 3.375, "3.37 at two decimals"};
  if (k == 32) return SpeedupExpectation{3.15, 3.25, "about 3.2"};
  return std::nullopt;
}

namespace {

Scenario conv_scenario(std::uint32_t n, std::uint32_t k, double f, std::uint64_t seed,
                       ScenarioMode mode) {
  Scenario s;
  s.name = "table3";
  s.kind = ScenarioKind::Conv;
  s.mode = mode;
  s.placement = Placement::Packed;
  s.n = n;
  s.k = k;
  s.seed = seed;
  s.sim.frequency_hz = f;
  return s;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void check_run(Table3Report& r, const ScenarioResult& run, const std::string& label) {
  r.checks.push_back({label + " busy cycles", run.busy_cycles == r.busy_model,
                      std::to_string(run.busy_cycles) + " vs " + std::to_string(r.busy_model)});
  r.checks.push_back({label + " output", run.outputs_match() && !run.dsp_error && !run.timed_out,
                      std::to_string(run.mismatches) + " mismatching words"});
}

}  // namespace

Table3Report run_table3(std::uint32_t k, double frequency_hz, std::uint64_t seed) {
  Table3Report r;
  r.k = k;
  r.frequency_hz = frequency_hz;
  const perf::ConvWorkload w{r.n, k};
  perf::validate(w);
  r.sw_cycles = perf::sw_conv_cycles(w);
  r.busy_model = perf::dsp_conv_busy_cycles(w);
  r.dsp_cycles = perf::dsp_conv_cycles(w);
  r.speedup = perf::speedup(w);
  r.sw_latency_s = perf::latency_seconds(r.sw_cycles, frequency_hz);
  r.dsp_latency_s = perf::latency_seconds(r.dsp_cycles, frequency_hz);

  r.testbench = run_scenario(conv_scenario(r.n, k, frequency_hz, seed, ScenarioMode::Testbench));
  r.full_system = run_scenario(conv_scenario(r.n, k, frequency_hz, seed, ScenarioMode::FullSystem));
  check_run(r, r.testbench, "testbench");
  check_run(r, r.full_system, "full-system");

  if (const auto e = expected_speedup(k)) {
    r.checks.push_back({"model speedup", r.speedup >= e->lo && r.speedup <= e->hi,
                        fmt("%.4f", r.speedup) + " expected " + e->label + " [" +
                            fmt("%.3f", e->lo) + ", " + fmt("%.3f", e->hi) + "]"});
  }
  if (k == 16 && frequency_hz == 100e6) {
    const std::string sw = fmt("%.5f", r.sw_latency_s * 1e3);
    const std::string dsp = fmt("%.5f", r.dsp_latency_s * 1e3);
    r.checks.push_back({"software latency", sw == "1.66485", sw + " ms expected 1.66485 ms"});
    r.checks.push_back({"accelerator latency", dsp == "0.49451", dsp + " ms expected 0.49451 ms"});
  }
  return r;
}

std::string format_table3(const Table3Report& r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "Convolution N=%u K=%u at %.6g Hz\n\n", r.n, r.k,
                r.frequency_hz);
  out << line;
  std::snprintf(line, sizeof line, "%-28s %14s %14s %14s\n", "quantity", "model", "testbench",
                "full-system");
  out << line;
  auto row = [&](const char* name, const std::string& m, const std::string& t,
                 const std::string& f) {
    std::snprintf(line, sizeof line, "%-28s %14s %14s %14s\n", name, m.c_str(), t.c_str(),
                  f.c_str());
    out << line;
  };
  const auto& tb = r.testbench;
  const auto& fs = r.full_system;
  const std::uint64_t tb_total = tb.busy_cycles + tb.config_write_cycles;
  const std::uint64_t fs_total = fs.busy_cycles + fs.config_write_cycles;
  auto u = [](std::uint64_t v) { return std::to_string(v); };
  auto ratio = [&](std::uint64_t total) {
    return total ? fmt("%.4f", static_cast<double>(r.sw_cycles) / static_cast<double>(total)) : "-";
  };

  const std::string per_output = u(r.n - r.k + 1) + " x " + u(10 * std::uint64_t{r.k} + 5);
  row("software cycles", u(r.sw_cycles), "-", "-");
  row("  outputs x cycles/output", per_output, "", "");
  row("accelerator busy cycles", u(r.busy_model), u(tb.busy_cycles), u(fs.busy_cycles));
  row("configuration cycles", u(perf::kDefaultConfigCycles), u(tb.config_write_cycles),
      u(fs.config_write_cycles));
  row("accelerator total", u(r.dsp_cycles), u(tb_total), u(fs_total));
  row("speedup", fmt("%.4f", r.speedup), ratio(tb_total), ratio(fs_total));
  row("software latency (ms)", fmt("%.5f", r.sw_latency_s * 1e3), "-", "-");
  row("accelerator latency (ms)", fmt("%.5f", r.dsp_latency_s * 1e3),
      fmt("%.5f", static_cast<double>(tb_total) / r.frequency_hz * 1e3),
      fmt("%.5f", static_cast<double>(fs_total) / r.frequency_hz * 1e3));
  row("CPU cycles (full system)", "-", "-", u(fs.report.cpu.cycles));

  out << "\nchecks:\n";
  for (const auto& c : r.checks) {
    out << "  [" << (c.ok ? "ok" : "MISMATCH") << "] " << c.name << ": " << c.detail << "\n";
  }
  return out.str();
}

}  // namespace rvdsp
