#include "rvdsp/hexwords.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rvdsp {

namespace {

bool parse_hex8(std::string_view token, std::uint32_t& out) {
  if (token.size() != 8) return false;
  std::uint32_t v = 0;
  for (char c : token) {
    v <<= 4;
    if (c >= '0' && c <= '9') v |= static_cast<std::uint32_t>(c - '0');
    else if (c >= 'a' && c <= 'f') v |= static_cast<std::uint32_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v |= static_cast<std::uint32_t>(c - 'A' + 10);
    else return false;
  }
  out = v;
  return true;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<ImageWord> parse_hexwords(std::string_view text) {
  std::vector<ImageWord> out;
  std::uint64_t cursor = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    std::uint32_t value = 0;
    if (line.front() == '@') {
      if (!parse_hex8(line.substr(1), value)) {
        throw HexwordsError(line_no, "cursor must be '@' followed by 8 hex digits");
      }
      if (value % kWordBytes != 0) throw HexwordsError(line_no, "cursor is not word aligned");
      cursor = value;
      continue;
    }
    if (!parse_hex8(line, value)) {
      throw HexwordsError(line_no, "expected 8 hex digits, got '" + std::string(line) + "'");
    }
    if (cursor > 0xFFFF'FFFCull) throw HexwordsError(line_no, "cursor ran past the address space");
    out.push_back({static_cast<Address>(cursor), value, line_no});
    cursor += kWordBytes;
  }
  return out;
}

std::vector<ImageWord> read_hexwords_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_hexwords(ss.str());
  } catch (const HexwordsError& e) {
    throw HexwordsError(e.line(), path.string() + ": " + e.detail());
  }
}

void load_image(std::span<const ImageWord> image, Rom& rom, Sram& sram) {
  for (const auto& w : image) {
    switch (classify_address(w.addr).region) {
      case Region::InstMem: rom.load(w.addr, w.value); break;
      case Region::DataMem: sram.poke(w.addr, w.value); break;
      default: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "word targets 0x%08X outside InstMem/DataMem", w.addr);
        throw HexwordsError(w.line, buf);
      }
    }
  }
}

std::string format_hexwords(Address base, std::span<const Word> words) {
  std::string out;
  out.reserve(10 + words.size() * 9);
  char buf[16];
  std::snprintf(buf, sizeof buf, "@%08X\n", base);
  out += buf;
  for (Word w : words) {
    std::snprintf(buf, sizeof buf, "%08X\n", w);
    out += buf;
  }
  return out;
}

}  // namespace rvdsp
