// sim: command-line front end for the rvdsp simulator and cycle model.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "rvdsp/hexwords.hpp"
#include "rvdsp/isa.hpp"
#include "rvdsp/kernels.hpp"
#include "rvdsp/perf_model.hpp"
#include "rvdsp/report.hpp"
#include "rvdsp/scenario.hpp"
#include "rvdsp/table3.hpp"

namespace {

using namespace rvdsp;

enum Exit : int {
  kOk = 0,
  kConfigError = 2,
  kValidationError = 3,
  kSimulationFault = 4,
  kTimeout = 5,
  kTable3Mismatch = 6,
};

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

std::string ms(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f ms", seconds * 1e3);
  return buf;
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string scenario;
  std::string report;
  std::vector<std::string> dump;  // region, file pairs
  std::string trace;
  std::string trace_level = "events";
  std::uint64_t max_cycles = 0;
};

int cmd_run(const RunArgs& a) {
  Scenario s = load_scenario(a.scenario);
  if (a.max_cycles > 0) s.sim.max_cycles = a.max_cycles;

  std::ofstream trace_file;
  std::unique_ptr<StreamTrace> trace;
  if (!a.trace.empty()) {
    trace_file.open(a.trace);
    if (!trace_file) throw ConfigError("cannot open trace file '" + a.trace + "'");
    trace = std::make_unique<StreamTrace>(trace_file);
    trace->set_level(a.trace_level == "verbose" ? TraceLevel::Verbose : TraceLevel::Events);
  }

  const ScenarioResult r = run_scenario(s, trace.get());

  std::printf("scenario      %s (%s, %s)\n", s.name.c_str(), std::string(to_string(s.kind)).c_str(),
              std::string(to_string(s.mode)).c_str());
  std::printf("stop          %s\n", std::string(to_string(r.stop)).c_str());
  std::printf("total cycles  %llu\n", static_cast<unsigned long long>(r.report.total_cycles));
  std::printf("busy cycles   %llu (uncontended formula %llu)\n",
              static_cast<unsigned long long>(r.busy_cycles),
              static_cast<unsigned long long>(r.expected_busy_cycles));
  std::printf("MACs          %llu (expected %llu) over %llu call(s)\n",
              static_cast<unsigned long long>(r.mac_count),
              static_cast<unsigned long long>(r.expected_macs),
              static_cast<unsigned long long>(r.calls));
  std::printf("config cycles %llu measured\n", static_cast<unsigned long long>(r.config_write_cycles));
  if (r.report.cpu.enabled) {
    std::printf("cpu           retired %llu in %llu cycles\n",
                static_cast<unsigned long long>(r.report.cpu.retired),
                static_cast<unsigned long long>(r.report.cpu.cycles));
  }
  if (r.dot_result) std::printf("dot result    %lld\n", static_cast<long long>(*r.dot_result));
  std::printf("output check  %s\n", r.timed_out          ? "not checked (timeout)"
                                     : r.outputs_match() ? "matches reference"
                                                         : "MISMATCH");

  if (!a.report.empty() && !write_file(a.report, scenario_report_json(r) + "\n")) {
    throw ConfigError("cannot write report '" + a.report + "'");
  }
  for (std::size_t i = 0; i + 1 < a.dump.size(); i += 2) {
    const std::string& region = a.dump[i];
    const std::string& path = a.dump[i + 1];
    std::string text;
    if (region == "data") {
      text = format_hexwords(map::kDataBase, r.sram);
    } else {
      const Buffer* found = nullptr;
      for (const Buffer& b : r.buffers) {
        if (b.name == region) found = &b;
      }
      if (found == nullptr) throw ConfigError("unknown dump region '" + region + "'");
      const std::size_t first = (found->addr - map::kDataBase) / 4;
      text = format_hexwords(found->addr, std::span<const Word>(r.sram).subspan(first, found->words));
    }
    if (!write_file(path, text)) throw ConfigError("cannot write dump '" + path + "'");
  }

  if (r.timed_out) {
    std::fprintf(stderr, "error: simulation timed out after %llu cycles\n",
                 static_cast<unsigned long long>(s.sim.max_cycles));
    return kTimeout;
  }
  if (r.report.cpu.fault) {
    std::fprintf(stderr, "error: CPU fault %s at pc 0x%08X: %s\n",
                 std::string(to_string(r.report.cpu.fault->kind)).c_str(), r.report.cpu.fault->pc,
                 r.report.cpu.fault->cause.c_str());
    return kSimulationFault;
  }
  if (r.dsp_error) {
    std::fprintf(stderr, "error: accelerator reported STATUS.Error\n");
    return kSimulationFault;
  }
  if (!r.outputs_match()) {
    std::fprintf(stderr, "error: output differs from the reference in %llu word(s)\n",
                 static_cast<unsigned long long>(r.mismatches));
    return kSimulationFault;
  }
  return kOk;
}

// ---------------------------------------------------------------- model

struct ModelArgs {
  std::uint64_t n = 1024, k = 16, len = 8192, c = 4, k_out = 8, inputs = 128, outputs = 64;
  std::uint64_t c_cfg = perf::kDefaultConfigCycles, c_int = 0;
  double freq = 100e6;
  perf::EnergyParams energy;
};

int model_conv(const ModelArgs& a) {
  const perf::ConvWorkload w{a.n, a.k};
  perf::validate(w);
  const auto sw = perf::sw_conv_cycles(w);
  const auto busy = perf::dsp_conv_busy_cycles(w);
  const auto dsp = perf::dsp_conv_cycles(w, a.c_cfg, a.c_int);
  const double sp = perf::speedup(w, a.c_cfg, a.c_int);
  std::printf("N %llu  K %llu  outputs %llu\n", static_cast<unsigned long long>(a.n),
              static_cast<unsigned long long>(a.k), static_cast<unsigned long long>(w.outputs()));
  std::printf("C_SW     %llu\n", static_cast<unsigned long long>(sw));
  std::printf("C_DSP    %llu  (busy %llu + config %llu + interrupt %llu)\n",
              static_cast<unsigned long long>(dsp), static_cast<unsigned long long>(busy),
              static_cast<unsigned long long>(a.c_cfg), static_cast<unsigned long long>(a.c_int));
  std::printf("speedup  %.2f  (%.6f)\n", sp, sp);
  std::printf("latency  sw %s  dsp %s  at %.6g Hz\n",
              ms(perf::latency_seconds(sw, a.freq)).c_str(),
              ms(perf::latency_seconds(dsp, a.freq)).c_str(), a.freq);
  return kOk;
}

int model_dot(const ModelArgs& a) {
  std::printf("L %llu\n", static_cast<unsigned long long>(a.len));
  std::printf("sw   %llu  (per-element approximation %llu)\n",
              static_cast<unsigned long long>(perf::sw_dot_cycles(a.len)),
              static_cast<unsigned long long>(perf::sw_dot_cycles_rounded(a.len)));
  std::printf("dsp  %llu  (per-element approximation %llu)\n",
              static_cast<unsigned long long>(perf::dsp_dot_cycles(a.len)),
              static_cast<unsigned long long>(perf::dsp_dot_cycles_rounded(a.len)));
  std::printf("speedup  %.4f  (limit %.4f)\n", perf::dot_speedup(a.len), 10.0 / 3.0);
  std::printf("latency  sw %s  dsp %s  at %.6g Hz\n",
              ms(perf::latency_seconds(perf::sw_dot_cycles(a.len), a.freq)).c_str(),
              ms(perf::latency_seconds(perf::dsp_dot_cycles(a.len), a.freq)).c_str(), a.freq);
  return kOk;
}

int model_cnn(const ModelArgs& a) {
  const perf::CnnLayerShape s{a.n, a.k, a.c, a.k_out, 1};
  const auto c = perf::cnn_layer_cycles(s);
  std::printf("N %llu  K %llu  C %llu  K_out %llu\n", static_cast<unsigned long long>(a.n),
              static_cast<unsigned long long>(a.k), static_cast<unsigned long long>(a.c),
              static_cast<unsigned long long>(a.k_out));
  std::printf("MACs  %llu\n", static_cast<unsigned long long>(c.macs));
  std::printf("sw    %llu cycles  %s\n", static_cast<unsigned long long>(c.sw),
              ms(perf::latency_seconds(c.sw, a.freq)).c_str());
  std::printf("dsp   %llu cycles  %s\n", static_cast<unsigned long long>(c.dsp),
              ms(perf::latency_seconds(c.dsp, a.freq)).c_str());
  std::printf("calls %llu one-dimensional convolutions of %llu outputs\n",
              static_cast<unsigned long long>(a.c * a.k_out), static_cast<unsigned long long>(a.n));
  return kOk;
}

int model_dense(const ModelArgs& a) {
  const perf::DenseLayerShape s{a.inputs, a.outputs};
  const auto exact = perf::dense_layer_cycles(s);
  const auto rounded = perf::dense_layer_cycles_rounded(s);
  std::printf("inputs %llu  outputs %llu  MACs %llu\n", static_cast<unsigned long long>(a.inputs),
              static_cast<unsigned long long>(a.outputs), static_cast<unsigned long long>(exact.macs));
  std::printf("sw   %llu  (per-MAC approximation %llu)\n", static_cast<unsigned long long>(exact.sw),
              static_cast<unsigned long long>(rounded.sw));
  std::printf("dsp  %llu  (per-MAC approximation %llu)\n",
              static_cast<unsigned long long>(exact.dsp),
              static_cast<unsigned long long>(rounded.dsp));
  std::printf("speedup  %.4f\n", static_cast<double>(exact.sw) / static_cast<double>(exact.dsp));
  return kOk;
}

int model_energy(const ModelArgs& a) {
  const double acc = perf::energy_per_tap(a.energy, perf::ExecutionMode::Accelerator);
  const double sw = perf::energy_per_tap(a.energy, perf::ExecutionMode::Software);
  std::printf("accelerator  %.6g pJ/tap\n", acc);
  std::printf("software     %.6g pJ/tap  (register-file accesses per tap %u)\n", sw,
              a.energy.regfile_accesses_per_tap);
  if (acc > 0) std::printf("ratio        %.4f\n", sw / acc);
  return kOk;
}

// ---------------------------------------------------------------- asm

int cmd_asm_list(const std::string& path) {
  for (const ImageWord& w : read_hexwords_file(path)) {
    std::printf("%s\n", listing_line(w.addr, w.value).c_str());
  }
  return kOk;
}

int cmd_asm_kernel(const std::string& kernel, std::uint32_t n, std::uint32_t k,
                   const std::string& out) {
  ConvConfig cfg{0x8000, 0x8000 + 4 * n, 0x8000 + 4 * (n + k), n, k};
  std::vector<Word> words;
  if (kernel == "conv-sw") words = kernels::software_conv(cfg);
  else if (kernel == "conv-accel") words = kernels::accel_conv(cfg);
  else if (kernel == "dot-accel") words = kernels::accel_dot({0x8000, 0x8000 + 4 * n, n});
  else throw ConfigError("unknown kernel '" + kernel + "'");
  const std::string text = format_hexwords(map::kInstBase, words);
  if (out.empty()) std::fputs(text.c_str(), stdout);
  else if (!write_file(out, text)) throw ConfigError("cannot write '" + out + "'");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-stepped RV32IM + DSP accelerator simulator"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("--scenario", run.scenario, "Scenario file")->required();
  run_cmd->add_option("--report", run.report, "Write the JSON report here");
  run_cmd->add_option("--dump", run.dump, "Dump a region (data or a buffer name) as hexwords")
      ->expected(2)
      ->allow_extra_args(false);
  run_cmd->add_option("--trace", run.trace, "Write a cycle trace here");
  run_cmd->add_option("--trace-level", run.trace_level, "events or verbose")
      ->check(CLI::IsMember({"events", "verbose"}));
  run_cmd->add_option("--max-cycles", run.max_cycles, "Override the cycle limit")
      ->check(CLI::PositiveNumber);

  ModelArgs model;
  auto* model_cmd = app.add_subcommand("model", "Evaluate the analytic cycle model");
  model_cmd->require_subcommand(1);
  auto freq_opt = [&](CLI::App* c) {
    c->add_option("--freq", model.freq, "Clock frequency in Hz")->check(CLI::PositiveNumber);
  };
  auto* m_conv = model_cmd->add_subcommand("conv", "1D convolution");
  m_conv->add_option("--n", model.n, "Input length")->required();
  m_conv->add_option("--k", model.k, "Kernel length")->required();
  m_conv->add_option("--c-cfg", model.c_cfg, "Configuration cycles");
  m_conv->add_option("--c-int", model.c_int, "Interrupt handling cycles");
  freq_opt(m_conv);
  auto* m_dot = model_cmd->add_subcommand("dot", "Dot product");
  m_dot->add_option("--len", model.len, "Vector length")->required();
  freq_opt(m_dot);
  auto* m_cnn = model_cmd->add_subcommand("cnn", "1D CNN layer");
  m_cnn->add_option("--n", model.n, "Input length")->required();
  m_cnn->add_option("--k", model.k, "Kernel size")->required();
  m_cnn->add_option("--c", model.c, "Input channels")->required();
  m_cnn->add_option("--k-out", model.k_out, "Output channels")->required();
  freq_opt(m_cnn);
  auto* m_dense = model_cmd->add_subcommand("dense", "Dense layer");
  m_dense->add_option("--inputs", model.inputs, "Input features")->required();
  m_dense->add_option("--outputs", model.outputs, "Output features")->required();
  freq_opt(m_dense);
  auto* m_energy = model_cmd->add_subcommand("energy", "Energy per tap");
  m_energy->add_option("--e-mul", model.energy.e_mul, "pJ per multiply");
  m_energy->add_option("--e-add", model.energy.e_add, "pJ per add");
  m_energy->add_option("--e-mem", model.energy.e_mem_rd, "pJ per memory read");
  m_energy->add_option("--e-fetch", model.energy.e_instr_fetch, "pJ per instruction fetch");
  m_energy->add_option("--e-rf", model.energy.e_regfile, "pJ per register-file access");
  m_energy->add_option("--rf-accesses", model.energy.regfile_accesses_per_tap,
                       "Register-file accesses per software tap");

  std::uint32_t t3_k = 16;
  double t3_freq = 100e6;
  std::uint64_t t3_seed = 7;
  std::string t3_json;
  auto* t3_cmd = app.add_subcommand("table3", "Model vs. simulation for N=1024");
  t3_cmd->add_option("--k", t3_k, "Kernel length")->check(CLI::Range(1u, 1024u));
  t3_cmd->add_option("--freq", t3_freq, "Clock frequency in Hz")->check(CLI::PositiveNumber);
  t3_cmd->add_option("--seed", t3_seed, "Data seed");
  t3_cmd->add_option("--json", t3_json, "Also write the comparison as JSON");

  std::string asm_list, asm_kernel, asm_out;
  std::uint32_t asm_n = 64, asm_k = 8;
  auto* asm_cmd = app.add_subcommand("asm", "Disassemble or generate programs");
  auto* list_opt = asm_cmd->add_option("--list", asm_list, "Disassemble a hexwords program");
  auto* kernel_opt = asm_cmd->add_option("--kernel", asm_kernel, "conv-sw, conv-accel or dot-accel")
                         ->excludes(list_opt);
  asm_cmd->add_option("--n", asm_n, "Kernel N (or L)")->needs(kernel_opt);
  asm_cmd->add_option("--k", asm_k, "Kernel K")->needs(kernel_opt);
  asm_cmd->add_option("-o,--out", asm_out, "Output file")->needs(kernel_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run);
    if (m_conv->parsed()) return model_conv(model);
    if (m_dot->parsed()) return model_dot(model);
    if (m_cnn->parsed()) return model_cnn(model);
    if (m_dense->parsed()) return model_dense(model);
    if (m_energy->parsed()) return model_energy(model);
    if (t3_cmd->parsed()) {
      const Table3Report r = run_table3(t3_k, t3_freq, t3_seed);
      std::fputs(format_table3(r).c_str(), stdout);
      if (!t3_json.empty() && !write_file(t3_json, table3_json(r) + "\n")) {
        throw ConfigError("cannot write '" + t3_json + "'");
      }
      return r.mismatch() ? kTable3Mismatch : kOk;
    }
    if (asm_cmd->parsed()) {
      if (!asm_list.empty()) return cmd_asm_list(asm_list);
      if (!asm_kernel.empty()) return cmd_asm_kernel(asm_kernel, asm_n, asm_k, asm_out);
      throw ConfigError("asm needs --list or --kernel");
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const HexwordsError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const ScenarioError& e) {
    std::fprintf(stderr, "scenario error: %s\n", e.what());
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "simulation error: %s\n", e.what());
    return kSimulationFault;
  }
  return kOk;
}
