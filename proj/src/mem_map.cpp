#include "rvdsp/mem_map.hpp"

#include <cstdio>

namespace rvdsp {

namespace {

std::string hex32(Address addr) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", addr);
  return buf;
}

struct RegionBounds {
  Region region;
  Address base;
  Address last;
};

constexpr std::array<RegionBounds, 5> kRegions{{
    {Region::InstMem, map::kInstBase, map::kInstLast},
    {Region::DataMem, map::kDataBase, map::kDataLast},
    {Region::ConvRegs, map::kConvBase, map::kConvLast},
    {Region::DotRegs, map::kDotBase, map::kDotLast},
    {Region::Reserved, map::kReservedBase, map::kReservedLast},
}};

}  // namespace

std::string_view to_string(Region region) {
  switch (region) {
    case Region::InstMem: return "InstMem";
    case Region::DataMem: return "DataMem";
    case Region::ConvRegs: return "ConvRegs";
    case Region::DotRegs: return "DotRegs";
    case Region::Reserved: return "Reserved";
    case Region::Unmapped: return "Unmapped";
  }
  return "?";
}

MisalignedAddress::MisalignedAddress(Address address)
    : AddressError("misaligned word access at " + hex32(address), address) {}

OutOfRangeAddress::OutOfRangeAddress(Address address, std::string_view what)
    : AddressError(hex32(address) + " is outside " + std::string(what), address) {}

RomWriteError::RomWriteError(Address address)
    : AddressError("write to instruction ROM at " + hex32(address), address) {}

RegionHit classify_address(Address addr) noexcept {
  for (const auto& r : kRegions) {
    if (addr >= r.base && addr <= r.last) return {r.region, addr - r.base};
  }
  return {Region::Unmapped, 0};
}

RegionHit decode_address(Address addr) {
  if (addr % kWordBytes != 0) throw MisalignedAddress(addr);
  return classify_address(addr);
}

bool data_range_ok(Address base, std::uint64_t words) noexcept {
  if (base % kWordBytes != 0) return false;
  const std::uint64_t begin = base;
  const std::uint64_t end = begin + words * kWordBytes;  // exclusive
  return begin >= map::kDataBase && end <= std::uint64_t{map::kDataLast} + 1;
}

std::uint64_t WordStore::digest() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (Word w : words_) {
    for (int lane = 0; lane < 4; ++lane) {
      h ^= (w >> (8 * lane)) & 0xFFu;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

std::size_t WordStore::index(Address addr) const {
  if (addr % kWordBytes != 0) throw MisalignedAddress(addr);
  if (!contains(addr)) {
    throw OutOfRangeAddress(addr, base_ == map::kInstBase ? "InstMem" : "DataMem");
  }
  return (addr - base_) / kWordBytes;
}

void Rom::write(Address addr, Word) { throw RomWriteError(addr); }

Word Sram::access(std::uint64_t cycle, Address addr, bool write, Word wdata,
                  std::uint8_t byte_mask) {
  if (cycle == last_cycle_) {
    throw std::logic_error("second SRAM access in cycle " + std::to_string(cycle));
  }
  static_cast<void>(index(addr));  // validate before claiming the port
  last_cycle_ = cycle;
  ++accesses_;
  if (write) poke(addr, merge_bytes(peek(addr), wdata, byte_mask));
  return peek(addr);
}

Word sram_access(Sram& mem, Address addr, bool write, Word wdata) {
  if (write) mem.poke(addr, wdata);
  return mem.peek(addr);
}

}  // namespace rvdsp
