#pragma once

// Sectioned key/value text files (a small TOML subset):
//
//   # comment
//   [section]
//   key = 123            # integers: decimal, 0x hex, '_' separators, sign
//   key = 1.5e6          # floats
//   key = "text"         # strings (no escapes beyond \" and \\)
//   key = true           # booleans
//   key = [1, -2, 0x3]   # integer arrays on one line

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rvdsp {

class KvError : public std::runtime_error {
 public:
  KvError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct KvValue {
  std::variant<std::int64_t, double, std::string, bool, std::vector<std::int64_t>> value;
  int line = 0;
};

class KvFile {
 public:
  static KvFile parse(const std::string& text);
  static KvFile read(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const { return sections_.count(section) != 0; }

  std::optional<std::int64_t> integer(const std::string& section, const std::string& key) const;
  std::optional<double> number(const std::string& section, const std::string& key) const;
  std::optional<std::string> string(const std::string& section, const std::string& key) const;
  std::optional<bool> boolean(const std::string& section, const std::string& key) const;
  std::optional<std::vector<std::int64_t>> integers(const std::string& section,
                                                    const std::string& key) const;

  /// Throws KvError naming the first key not in `allowed` for that section,
  /// or the first section not listed at all.
  void require_known(const std::map<std::string, std::vector<std::string>>& allowed) const;

 private:
  const KvValue* find(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, KvValue>> sections_;
  std::map<std::string, int> section_lines_;
};

}  // namespace rvdsp
