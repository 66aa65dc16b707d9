#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rvdsp/soc.hpp"

namespace harness {

using namespace rvdsp;

struct ConvRun {
  std::vector<Word> y;
  DspCounters counters;
  std::uint64_t start_cycle = 0;  // cycle of the START write
  std::uint64_t done_cycle = 0;   // first cycle STATUS.Done was observed
};

/// Packs x, h and y back to back from 0x8000 and drives the accelerator
/// from the host port.
inline ConvRun conv_testbench(Soc& soc, const std::vector<std::int32_t>& x,
                              const std::vector<std::int32_t>& h) {
  const Address xa = map::kDataBase;
  const Address ha = xa + 4 * static_cast<Address>(x.size());
  const Address ya = ha + 4 * static_cast<Address>(h.size());
  soc.write_data(xa, std::span<const std::int32_t>(x));
  soc.write_data(ha, std::span<const std::int32_t>(h));
  const Address base = map::kConvBase;
  soc.host_write(base + conv_reg::kInAddr, xa);
  soc.host_write(base + conv_reg::kKernAddr, ha);
  soc.host_write(base + conv_reg::kOutAddr, ya);
  soc.host_write(base + conv_reg::kInLen, static_cast<Word>(x.size()));
  soc.host_write(base + conv_reg::kKernLen, static_cast<Word>(h.size()));
  ConvRun r;
  r.start_cycle = soc.cycle();
  soc.host_write(base + conv_reg::kControl, control_bits::kStart);
  soc.host_poll(base + conv_reg::kStatus, status_bits::kDone | status_bits::kError);
  r.done_cycle = soc.cycle() - 1;
  soc.host_write(base + conv_reg::kIrqClear, 1);
  r.counters = soc.conv().counters();
  if (h.size() <= x.size() && !h.empty()) r.y = soc.read_data(ya, x.size() - h.size() + 1);
  return r;
}

struct DotRun {
  std::int64_t result = 0;
  DspCounters counters;
};

inline DotRun dot_testbench(Soc& soc, Address va, Address vb, std::uint32_t len) {
  const Address base = map::kDotBase;
  soc.host_write(base + dot_reg::kVaAddr, va);
  soc.host_write(base + dot_reg::kVbAddr, vb);
  soc.host_write(base + dot_reg::kLen, len);
  soc.host_write(base + dot_reg::kControl, control_bits::kStart);
  soc.host_poll(base + dot_reg::kStatus, status_bits::kDone | status_bits::kError);
  DotRun r;
  const Word lo = soc.host_read(base + dot_reg::kResultLo);
  const Word hi = soc.host_read(base + dot_reg::kResultHi);
  r.result = static_cast<std::int64_t>((std::uint64_t{hi} << 32) | lo);
  soc.host_write(base + dot_reg::kIrqClear, 1);
  r.counters = soc.dot().counters();
  return r;
}

inline DotRun dot_testbench(Soc& soc, const std::vector<std::int32_t>& a,
                            const std::vector<std::int32_t>& b) {
  const Address va = map::kDataBase;
  const Address vb = va + 4 * static_cast<Address>(a.size());
  soc.write_data(va, std::span<const std::int32_t>(a));
  soc.write_data(vb, std::span<const std::int32_t>(b));
  return dot_testbench(soc, va, vb, static_cast<std::uint32_t>(a.size()));
}

}  // namespace harness
