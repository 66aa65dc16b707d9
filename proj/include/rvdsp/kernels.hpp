#pragma once

// Program generators for the benchmark workloads.

#include <string>
#include <vector>

#include "rvdsp/conv1d.hpp"
#include "rvdsp/dotprod.hpp"
#include "rvdsp/program.hpp"

namespace rvdsp::kernels {

/// Scalar RV32IM convolution: y[i] = sum_j x[i+j]*h[j] (low 32 bits). The
/// tap loop is unrolled by two; an odd K peels its last tap.
std::vector<Word> software_conv(const ConvConfig& cfg);

/// Base registers expected by the driver fragments below.
inline constexpr std::uint8_t kConvBaseReg = reg::s0;
inline constexpr std::uint8_t kDotBaseReg = reg::s1;

/// Loads s0/s1 with the register block bases.
void emit_driver_prologue(ProgramBuilder& p);

/// Configure, start, poll STATUS until done, then IRQ_CLEAR. Leaves the
/// final STATUS value in a0. `tag` must be unique within the program.
void emit_conv_call(ProgramBuilder& p, const ConvConfig& cfg, bool int_en, const std::string& tag);

/// As above for the dot-product unit; leaves RESULT_LO/HI in a0/a1 and
/// STATUS in a2.
void emit_dot_call(ProgramBuilder& p, const DotConfig& cfg, bool int_en, const std::string& tag);

/// dst[i] += src[i] for i < words, 32-bit wrapping.
void emit_accumulate(ProgramBuilder& p, Address dst, Address src, std::uint32_t words,
                     const std::string& tag);

/// Complete programs ending in EBREAK.
std::vector<Word> accel_conv(const ConvConfig& cfg, bool int_en = false);
std::vector<Word> accel_dot(const DotConfig& cfg, bool int_en = false);

/// Streams `words` stores to DataMem starting at `base` (one SW every 7
/// cycles), then halts. Used to create bus contention.
std::vector<Word> store_traffic(Address base, std::uint32_t words);

}  // namespace rvdsp::kernels
