#pragma once

// Closed-form cycle, latency and energy estimates for the software and
// accelerated kernels.

#include <cstdint>
#include <string_view>

namespace rvdsp::perf {

struct ConvWorkload {
  std::uint64_t n = 0;  // input length
  std::uint64_t k = 0;  // kernel length

  std::uint64_t outputs() const noexcept { return n - k + 1; }
};

/// Throws std::invalid_argument unless 1 <= K <= N.
void validate(const ConvWorkload& w);

inline constexpr std::uint64_t kDefaultConfigCycles = 10;

/// (N-K+1)(10K+5): 8 cycles of load/load/mul/add plus 2 of loop overhead per
/// tap, 5 per output for the store and bookkeeping.
std::uint64_t sw_conv_cycles(const ConvWorkload& w);

/// (N-K+1)(3K+1): accelerator cycles between START and DONE.
std::uint64_t dsp_conv_busy_cycles(const ConvWorkload& w);

std::uint64_t dsp_conv_cycles(const ConvWorkload& w, std::uint64_t c_cfg = kDefaultConfigCycles,
                              std::uint64_t c_int = 0);

double speedup(const ConvWorkload& w, std::uint64_t c_cfg = kDefaultConfigCycles,
               std::uint64_t c_int = 0);

/// cycles / f_hz. Throws std::invalid_argument for f_hz <= 0.
double latency_seconds(std::uint64_t cycles, double f_hz);

std::uint64_t sw_dot_cycles(std::uint64_t len);   // 10L + 5
std::uint64_t dsp_dot_cycles(std::uint64_t len);  // 3L + 1
/// The per-element-only approximations 10L and 3L.
std::uint64_t sw_dot_cycles_rounded(std::uint64_t len);
std::uint64_t dsp_dot_cycles_rounded(std::uint64_t len);
double dot_speedup(std::uint64_t len);

struct CnnLayerShape {
  std::uint64_t n = 0;      // input length
  std::uint64_t k = 0;      // kernel size
  std::uint64_t c = 0;      // input channels
  std::uint64_t k_out = 0;  // output channels
  std::uint64_t batch = 1;
};

void validate(const CnnLayerShape& s);

struct LayerCycles {
  std::uint64_t macs = 0;
  std::uint64_t sw = 0;
  std::uint64_t dsp = 0;
};

std::uint64_t cnn_layer_macs(const CnnLayerShape& s);
LayerCycles cnn_layer_cycles(const CnnLayerShape& s, std::uint64_t per_mac_sw = 10,
                             std::uint64_t per_mac_dsp = 3);

struct DenseLayerShape {
  std::uint64_t inputs = 0;
  std::uint64_t outputs = 0;
};

void validate(const DenseLayerShape& s);

std::uint64_t dense_layer_macs(const DenseLayerShape& s);
/// Per-MAC approximation: 10 and 3 cycles per MAC.
LayerCycles dense_layer_cycles_rounded(const DenseLayerShape& s);
/// One dot call per output: outputs * (10L+5) and outputs * (3L+1).
LayerCycles dense_layer_cycles(const DenseLayerShape& s);

/// Energy per event in picojoules.
struct EnergyParams {
  double e_mul = 0;
  double e_add = 0;
  double e_mem_rd = 0;
  double e_instr_fetch = 0;
  double e_regfile = 0;
  std::uint32_t regfile_accesses_per_tap = 8;
};

/// Throws std::invalid_argument on a negative energy.
void validate(const EnergyParams& p);

enum class ExecutionMode : std::uint8_t { Software, Accelerator };
std::string_view to_string(ExecutionMode m);

/// Accelerator: E_mul + E_add + 2 E_mem_rd. Software adds four instruction
/// fetches and the configured register-file accesses.
double energy_per_tap(const EnergyParams& p, ExecutionMode mode);

}  // namespace rvdsp::perf
