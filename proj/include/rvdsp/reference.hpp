#pragma once

// Direct-form reference computations used to check simulator output in
// scenario reports.

#include <cstdint>
#include <span>
#include <vector>

#include "rvdsp/mac.hpp"

namespace rvdsp::reference {

inline std::vector<Word> conv1d(std::span<const std::int32_t> x, std::span<const std::int32_t> h,
                                TruncationPolicy policy) {
  std::vector<Word> y;
  if (h.empty() || x.size() < h.size()) return y;
  y.reserve(x.size() - h.size() + 1);
  for (std::size_t i = 0; i + h.size() <= x.size(); ++i) {
    MacUnit mac;
    for (std::size_t j = 0; j < h.size(); ++j) mac.accumulate(x[i + j], h[j]);
    y.push_back(truncate_accumulator(mac.accumulator(), policy));
  }
  return y;
}

inline std::int64_t dot(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  MacUnit mac;
  for (std::size_t j = 0; j < a.size() && j < b.size(); ++j) mac.accumulate(a[j], b[j]);
  return mac.accumulator();
}

}  // namespace rvdsp::reference
