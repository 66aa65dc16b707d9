#pragma once

#include <cstdint>
#include <string_view>

#include "rvdsp/mem_map.hpp"

namespace rvdsp {

enum class TruncationPolicy : std::uint8_t { Wrap, Saturate };

std::string_view to_string(TruncationPolicy p);

/// Narrows the 64-bit accumulator to a stored 32-bit output.
/// Wrap keeps the low word; Saturate clamps to [INT32_MIN, INT32_MAX].
constexpr Word truncate_accumulator(std::int64_t accum, TruncationPolicy policy) noexcept {
  if (policy == TruncationPolicy::Saturate) {
    if (accum > INT32_MAX) return static_cast<Word>(INT32_MAX);
    if (accum < INT32_MIN) return static_cast<Word>(INT32_MIN);
  }
  return static_cast<Word>(static_cast<std::uint64_t>(accum));
}

/// 32x32 -> 64 signed multiplier feeding a 64-bit accumulator. The
/// accumulator wraps modulo 2^64.
class MacUnit {
 public:
  void clear() noexcept { accumulator_ = 0; }

  void accumulate(std::int32_t multiplicand, std::int32_t multiplier) noexcept {
    product_ = std::int64_t{multiplicand} * std::int64_t{multiplier};
    accumulator_ = static_cast<std::int64_t>(static_cast<std::uint64_t>(accumulator_) +
                                             static_cast<std::uint64_t>(product_));
    ++operations_;
  }

  std::int64_t accumulator() const noexcept { return accumulator_; }
  std::int64_t product() const noexcept { return product_; }
  std::uint64_t operations() const noexcept { return operations_; }

 private:
  std::int64_t accumulator_ = 0;
  std::int64_t product_ = 0;
  std::uint64_t operations_ = 0;
};

}  // namespace rvdsp
