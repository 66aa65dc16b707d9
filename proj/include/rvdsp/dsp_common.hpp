#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace rvdsp {

namespace control_bits {
inline constexpr std::uint32_t kStart = 1u << 0;
inline constexpr std::uint32_t kIntEn = 1u << 1;
inline constexpr std::uint32_t kMask = kStart | kIntEn;
}  // namespace control_bits

namespace status_bits {
inline constexpr std::uint32_t kDone = 1u << 0;
inline constexpr std::uint32_t kError = 1u << 1;
}  // namespace status_bits

/// Why STATUS.Error was raised.
enum class DspFault : std::uint8_t {
  None,
  ZeroKernel,      // K = 0
  KernelTooLong,   // N < K
  InputRange,      // x or A outside DataMem
  KernelRange,     // h or B outside DataMem
  OutputRange,     // y outside DataMem
  BusError,        // MMI completion reported an error
};

std::string_view to_string(DspFault f);

struct DspCounters {
  std::uint64_t busy_cycles = 0;
  std::uint64_t mac_count = 0;
  std::uint64_t starts = 0;       // accepted starts, including ones failing validation
  std::uint64_t completions = 0;  // 0 -> 1 transitions of STATUS.Done
  std::uint64_t errors = 0;
  std::uint64_t ignored_writes = 0;   // writes dropped because the unit was busy
  std::uint64_t readonly_writes = 0;  // writes to read-only registers
  std::uint64_t config_writes = 0;
  std::uint64_t config_write_cycles = 0;  // first config write through the accepted start
};

/// Tags for MMI transactions whose data phase has not completed yet.
template <typename Tag>
class TagQueue {
 public:
  void push(Tag t) {
    if (size_ == buf_.size()) throw std::logic_error("MMI tag queue overflow");
    buf_[(head_ + size_++) % buf_.size()] = t;
  }
  Tag pop() {
    if (size_ == 0) throw std::logic_error("MMI completion without an outstanding request");
    Tag t = buf_[head_];
    head_ = (head_ + 1) % buf_.size();
    --size_;
    return t;
  }
  bool empty() const noexcept { return size_ == 0; }
  void clear() noexcept { head_ = size_ = 0; }

 private:
  std::array<Tag, 2> buf_{};
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

/// Tracks the span of cycles spent writing configuration before a start.
class ConfigWindow {
 public:
  void note_write(std::uint64_t cycle) noexcept {
    if (!open_) {
      open_ = true;
      first_ = cycle;
    }
  }
  /// Closes the window at the start cycle and returns its length.
  std::uint64_t close(std::uint64_t cycle) noexcept {
    if (!open_) return 0;
    open_ = false;
    return cycle - first_ + 1;
  }

 private:
  bool open_ = false;
  std::uint64_t first_ = 0;
};

}  // namespace rvdsp
