#include "rvdsp/report.hpp"

#include <cstdio>
#include <json.hpp>

#include "rvdsp/table3.hpp"

namespace rvdsp {

using nlohmann::ordered_json;

namespace {

std::string hex32(Word v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llX", static_cast<unsigned long long>(v));
  return buf;
}

ordered_json requester_json(const RequesterReport& r) {
  return {{"posted", r.posted},         {"grants", r.grants},
          {"completions", r.completions}, {"stalls", r.stalls},
          {"register_accesses", r.register_accesses}, {"errors", r.errors}};
}

ordered_json dsp_json(const DspReport& d) {
  const DspCounters& c = d.counters;
  return {{"busy_cycles", c.busy_cycles},
          {"mac_count", c.mac_count},
          {"starts", c.starts},
          {"completions", c.completions},
          {"errors", c.errors},
          {"ignored_writes", c.ignored_writes},
          {"readonly_writes", c.readonly_writes},
          {"config_writes", c.config_writes},
          {"config_write_cycles", c.config_write_cycles},
          {"irq", d.irq},
          {"status", d.status},
          {"state", d.state},
          {"fault", d.fault}};
}

ordered_json cpu_json(const CpuReport& c) {
  ordered_json classes = ordered_json::object();
  for (std::size_t i = 0; i < kCostClassCount; ++i) {
    classes[std::string(to_string(static_cast<CostClass>(i)))] = c.class_counts[i];
  }
  ordered_json j = {{"enabled", c.enabled},
                    {"halted", c.halted},
                    {"retired", c.retired},
                    {"cycles", c.cycles},
                    {"memory_wait_cycles", c.memory_wait_cycles},
                    {"class_counts", classes},
                    {"fault", nullptr}};
  if (c.fault) {
    j["fault"] = {{"kind", std::string(to_string(c.fault->kind))},
                  {"pc", hex32(c.fault->pc)},
                  {"word", hex32(c.fault->word)},
                  {"addr", hex32(c.fault->addr)},
                  {"cause", c.fault->cause}};
  }
  return j;
}

ordered_json cycle_json(const CycleReport& r) {
  return {{"total_cycles", r.total_cycles},
          {"bus",
           {{"cpu", requester_json(r.bus[0])},
            {"conv_dsp", requester_json(r.bus[1])},
            {"dot_dsp", requester_json(r.bus[2])}}},
          {"cpu", cpu_json(r.cpu)},
          {"conv_dsp", dsp_json(r.conv)},
          {"dot_dsp", dsp_json(r.dot)},
          {"reserved_writes", r.reserved_writes},
          {"sram_accesses", r.sram_accesses}};
}

ordered_json model_json(const ModelFigures& m) {
  ordered_json j = {{"sw_cycles", m.sw_cycles},
                    {"dsp_cycles", m.dsp_cycles},
                    {"busy_cycles", m.busy_cycles},
                    {"macs", m.macs},
                    {"speedup", m.speedup},
                    {"sw_latency_s", m.sw_latency_s},
                    {"dsp_latency_s", m.dsp_latency_s}};
  if (m.sw_cycles_rounded) j["sw_cycles_rounded"] = *m.sw_cycles_rounded;
  if (m.dsp_cycles_rounded) j["dsp_cycles_rounded"] = *m.dsp_cycles_rounded;
  return j;
}

ordered_json scenario_json(const Scenario& s) {
  ordered_json j = {{"name", s.name},
                    {"mode", std::string(to_string(s.mode))},
                    {"kind", std::string(to_string(s.kind))},
                    {"seed", s.seed},
                    {"truncation", std::string(to_string(s.sim.truncation))},
                    {"frequency_hz", s.sim.frequency_hz},
                    {"max_cycles", s.sim.max_cycles}};
  switch (s.kind) {
    case ScenarioKind::Conv: j["sizes"] = {{"n", s.n}, {"k", s.k}}; break;
    case ScenarioKind::Dot: j["sizes"] = {{"len", s.len}}; break;
    case ScenarioKind::CnnLayer:
      j["sizes"] = {{"n", s.cnn.n}, {"k", s.cnn.k}, {"c", s.cnn.c}, {"k_out", s.cnn.k_out}};
      break;
    case ScenarioKind::DenseLayer:
      j["sizes"] = {{"inputs", s.dense.inputs}, {"outputs", s.dense.outputs}};
      break;
  }
  return j;
}

ordered_json result_json(const ScenarioResult& r) {
  ordered_json buffers = ordered_json::array();
  for (const Buffer& b : r.buffers) {
    buffers.push_back({{"name", b.name}, {"addr", hex32(b.addr)}, {"words", b.words}});
  }
  std::uint64_t sram_digest = 0xcbf29ce484222325ull;
  for (const Word w : r.sram) {
    for (int i = 0; i < 4; ++i) {
      sram_digest ^= (w >> (8 * i)) & 0xFF;
      sram_digest *= 0x100000001b3ull;
    }
  }
  ordered_json j = {{"schema", kReportSchema},
                    {"scenario", scenario_json(r.scenario)},
                    {"status",
                     {{"stop", std::string(to_string(r.stop))},
                      {"timed_out", r.timed_out},
                      {"dsp_error", r.dsp_error},
                      {"outputs_match", r.outputs_match()},
                      {"mismatches", r.mismatches}}},
                    {"busy_cycles", r.busy_cycles},
                    {"expected_busy_cycles", r.expected_busy_cycles},
                    {"mac_count", r.mac_count},
                    {"expected_macs", r.expected_macs},
                    {"config_write_cycles", r.config_write_cycles},
                    {"calls", r.calls},
                    {"total_cycles", r.report.total_cycles},
                    {"dot_result", nullptr},
                    {"model", model_json(r.model)},
                    {"buffers", buffers},
                    {"report", cycle_json(r.report)},
                    {"memory",
                     {{"rom_digest_before", hex64(r.rom_digest_before)},
                      {"rom_digest_after", hex64(r.rom_digest_after)},
                      {"sram_digest", hex64(sram_digest)}}}};
  if (r.dot_result) {
    j["dot_result"] = {{"value", *r.dot_result},
                       {"reference", r.dot_reference ? ordered_json(*r.dot_reference) : nullptr}};
  }
  return j;
}

}  // namespace

std::string cycle_report_json(const CycleReport& r, int indent) {
  return cycle_json(r).dump(indent);
}

std::string scenario_report_json(const ScenarioResult& r, int indent) {
  return result_json(r).dump(indent);
}

std::string table3_json(const Table3Report& r, int indent) {
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  }
  ordered_json j = {{"schema", kReportSchema},
                    {"n", r.n},
                    {"k", r.k},
                    {"frequency_hz", r.frequency_hz},
                    {"model",
                     {{"sw_cycles", r.sw_cycles},
                      {"busy_cycles", r.busy_model},
                      {"dsp_cycles", r.dsp_cycles},
                      {"speedup", r.speedup},
                      {"sw_latency_s", r.sw_latency_s},
                      {"dsp_latency_s", r.dsp_latency_s}}},
                    {"testbench", result_json(r.testbench)},
                    {"full_system", result_json(r.full_system)},
                    {"checks", checks},
                    {"mismatch", r.mismatch()}};
  return j.dump(indent);
}

}  // namespace rvdsp
