#pragma once

#include <cstdint>
#include <vector>

namespace rvdsp {

/// SplitMix64. Data words are the high 32 bits of each output, reinterpreted
/// as signed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E37'79B9'7F4A'7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58'476D'1CE4'E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D0'49BB'1331'11EBull;
    return z ^ (z >> 31);
  }

  std::int32_t next_i32() noexcept { return static_cast<std::int32_t>(next() >> 32); }

  std::vector<std::int32_t> fill(std::size_t count) {
    std::vector<std::int32_t> out(count);
    for (auto& v : out) v = next_i32();
    return out;
  }

 private:
  std::uint64_t state_;
};

}  // namespace rvdsp
