#include "rvdsp/perf_model.hpp"

#include <stdexcept>
#include <string>

namespace rvdsp::perf {

void validate(const ConvWorkload& w) {
  if (w.k == 0 || w.k > w.n) {
    throw std::invalid_argument("conv workload needs 1 <= K <= N (got N=" + std::to_string(w.n) +
                                ", K=" + std::to_string(w.k) + ")");
  }
}

std::uint64_t sw_conv_cycles(const ConvWorkload& w) {
  validate(w);
  return w.outputs() * (10 * w.k + 5);
}

std::uint64_t dsp_conv_busy_cycles(const ConvWorkload& w) {
  validate(w);
  return w.outputs() * (3 * w.k + 1);
}

std::uint64_t dsp_conv_cycles(const ConvWorkload& w, std::uint64_t c_cfg, std::uint64_t c_int) {
  return dsp_conv_busy_cycles(w) + c_cfg + c_int;
}

double speedup(const ConvWorkload& w, std::uint64_t c_cfg, std::uint64_t c_int) {
  return static_cast<double>(sw_conv_cycles(w)) /
         static_cast<double>(dsp_conv_cycles(w, c_cfg, c_int));
}

double latency_seconds(std::uint64_t cycles, double f_hz) {
  if (!(f_hz > 0)) throw std::invalid_argument("frequency must be positive");
  return static_cast<double>(cycles) / f_hz;
}

std::uint64_t sw_dot_cycles(std::uint64_t len) { return 10 * len + 5; }
std::uint64_t dsp_dot_cycles(std::uint64_t len) { return 3 * len + 1; }
std::uint64_t sw_dot_cycles_rounded(std::uint64_t len) { return 10 * len; }
std::uint64_t dsp_dot_cycles_rounded(std::uint64_t len) { return 3 * len; }

double dot_speedup(std::uint64_t len) {
  return static_cast<double>(sw_dot_cycles(len)) / static_cast<double>(dsp_dot_cycles(len));
}

void validate(const CnnLayerShape& s) {
  if (s.n == 0 || s.k == 0 || s.c == 0 || s.k_out == 0 || s.batch == 0) {
    throw std::invalid_argument("CNN layer dimensions must be positive");
  }
}

std::uint64_t cnn_layer_macs(const CnnLayerShape& s) {
  validate(s);
  return s.n * s.k * s.c * s.k_out * s.batch;
}

LayerCycles cnn_layer_cycles(const CnnLayerShape& s, std::uint64_t per_mac_sw,
                             std::uint64_t per_mac_dsp) {
  const std::uint64_t macs = cnn_layer_macs(s);
  return {macs, per_mac_sw * macs, per_mac_dsp * macs};
}

void validate(const DenseLayerShape& s) {
  if (s.inputs == 0 || s.outputs == 0) {
    throw std::invalid_argument("dense layer dimensions must be positive");
  }
}

std::uint64_t dense_layer_macs(const DenseLayerShape& s) {
  validate(s);
  return s.inputs * s.outputs;
}

LayerCycles dense_layer_cycles_rounded(const DenseLayerShape& s) {
  const std::uint64_t macs = dense_layer_macs(s);
  return {macs, 10 * macs, 3 * macs};
}

LayerCycles dense_layer_cycles(const DenseLayerShape& s) {
  const std::uint64_t macs = dense_layer_macs(s);
  return {macs, s.outputs * sw_dot_cycles(s.inputs), s.outputs * dsp_dot_cycles(s.inputs)};
}

void validate(const EnergyParams& p) {
  if (p.e_mul < 0 || p.e_add < 0 || p.e_mem_rd < 0 || p.e_instr_fetch < 0 || p.e_regfile < 0) {
    throw std::invalid_argument("energy parameters must be non-negative");
  }
}

std::string_view to_string(ExecutionMode m) {
  return m == ExecutionMode::Software ? "software" : "accelerator";
}

double energy_per_tap(const EnergyParams& p, ExecutionMode mode) {
  validate(p);
  const double mac = p.e_mul + p.e_add + 2 * p.e_mem_rd;
  if (mode == ExecutionMode::Accelerator) return mac;
  return mac + 4 * p.e_instr_fetch + p.regfile_accesses_per_tap * p.e_regfile;
}

}  // namespace rvdsp::perf
