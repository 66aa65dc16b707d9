#pragma once

// "hexwords" memory images: one token per line.
//   @XXXXXXXX   set the load cursor (byte address, 8 hex digits)
//   XXXXXXXX    store one word at the cursor and advance it by 4
//   # ...       comment
// Blank lines are ignored.

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rvdsp/mem_map.hpp"

namespace rvdsp {

class HexwordsError : public std::runtime_error {
 public:
  HexwordsError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line),
        detail_(what) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

struct ImageWord {
  Address addr;
  Word value;
  std::size_t line = 0;  // source line, 0 when synthesized
};

std::vector<ImageWord> parse_hexwords(std::string_view text);
std::vector<ImageWord> read_hexwords_file(const std::filesystem::path& path);

/// Stores each word into ROM or SRAM according to its decoded region.
/// Throws HexwordsError when a word lands outside InstMem/DataMem.
void load_image(std::span<const ImageWord> image, Rom& rom, Sram& sram);

/// Serializes a contiguous run of words starting at `base`.
std::string format_hexwords(Address base, std::span<const Word> words);

}  // namespace rvdsp
