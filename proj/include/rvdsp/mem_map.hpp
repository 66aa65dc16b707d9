#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rvdsp {

using Word = std::uint32_t;
using Address = std::uint32_t;

inline constexpr std::uint32_t kWordBytes = 4;

/// Global address map. All bounds are inclusive byte addresses.
namespace map {
inline constexpr Address kInstBase = 0x0000'0000;
inline constexpr Address kInstLast = 0x0000'7FFF;
inline constexpr Address kDataBase = 0x0000'8000;
inline constexpr Address kDataLast = 0x0000'FFFF;
inline constexpr Address kConvBase = 0x0100'0000;
inline constexpr Address kConvLast = 0x0100'00FF;
inline constexpr Address kDotBase = 0x0100'0100;
inline constexpr Address kDotLast = 0x0100'01FF;
inline constexpr Address kReservedBase = 0x0100'0200;
inline constexpr Address kReservedLast = 0x0100'02FF;

inline constexpr std::uint32_t kMemoryWords = 8192;  // 32 KB each for ROM and SRAM

/// ECALL stores a0 here before halting.
inline constexpr Address kSyscallMailbox = kDataLast - 3;
}  // namespace map

enum class Region : std::uint8_t { InstMem, DataMem, ConvRegs, DotRegs, Reserved, Unmapped };

std::string_view to_string(Region region);

struct RegionHit {
  Region region = Region::Unmapped;
  std::uint32_t offset = 0;  // byte offset from the region base; 0 for Unmapped

  friend bool operator==(const RegionHit&, const RegionHit&) = default;
};

class AddressError : public std::runtime_error {
 public:
  AddressError(const std::string& what, Address address)
      : std::runtime_error(what), address_(address) {}
  Address address() const noexcept { return address_; }

 private:
  Address address_;
};

class MisalignedAddress : public AddressError {
 public:
  explicit MisalignedAddress(Address address);
};

class OutOfRangeAddress : public AddressError {
 public:
  OutOfRangeAddress(Address address, std::string_view what);
};

class RomWriteError : public AddressError {
 public:
  explicit RomWriteError(Address address);
};

/// Region lookup without an alignment check.
RegionHit classify_address(Address addr) noexcept;

/// Region lookup for a word access. Throws MisalignedAddress when addr % 4 != 0.
RegionHit decode_address(Address addr);

/// True when [base, base + 4*words) lies entirely inside DataMem and base is word aligned.
bool data_range_ok(Address base, std::uint64_t words) noexcept;

/// 32 KB of word storage anchored at a base address. Little-endian byte lanes:
/// byte 0 of a word is bits 7:0.
class WordStore {
 public:
  explicit WordStore(Address base) : base_(base) {}

  Address base() const noexcept { return base_; }
  Address last() const noexcept { return base_ + map::kMemoryWords * kWordBytes - 1; }
  bool contains(Address addr) const noexcept { return addr >= base_ && addr <= last(); }

  std::span<const Word> words() const noexcept { return words_; }
  Word peek(Address addr) const { return words_[index(addr)]; }
  void poke(Address addr, Word value) { words_[index(addr)] = value; }

  /// FNV-1a over the raw contents.
  std::uint64_t digest() const noexcept;

 protected:
  std::size_t index(Address addr) const;

 private:
  Address base_;
  std::array<Word, map::kMemoryWords> words_{};
};

/// Instruction ROM. Contents are set by image loading only.
class Rom : public WordStore {
 public:
  Rom() : WordStore(map::kInstBase) {}

  void load(Address addr, Word value) { poke(addr, value); }
  Word read(Address addr) const { return peek(addr); }
  [[noreturn]] void write(Address addr, Word value);
};

/// Single-port data SRAM. Each access completes in one cycle and at most one
/// access may occur per cycle; a second access in the same cycle throws.
class Sram : public WordStore {
 public:
  Sram() : WordStore(map::kDataBase) {}

  /// Reads or writes one word. byte_mask selects lanes for a write
  /// (bit i = byte i). Returns the stored word after the access.
  Word access(std::uint64_t cycle, Address addr, bool write, Word wdata,
              std::uint8_t byte_mask = 0xF);

  std::uint64_t accesses() const noexcept { return accesses_; }

 private:
  std::uint64_t accesses_ = 0;
  std::uint64_t last_cycle_ = UINT64_MAX;
};

/// Combined read/write on a standalone SRAM without cycle bookkeeping.
Word sram_access(Sram& mem, Address addr, bool write, Word wdata);

/// Merges the lanes of `value` selected by `byte_mask` into `old`.
constexpr Word merge_bytes(Word old, Word value, std::uint8_t byte_mask) noexcept {
  Word mask = 0;
  for (int lane = 0; lane < 4; ++lane) {
    if (byte_mask & (1u << lane)) mask |= 0xFFu << (8 * lane);
  }
  return (old & ~mask) | (value & mask);
}

}  // namespace rvdsp
