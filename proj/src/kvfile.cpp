#include "rvdsp/kvfile.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rvdsp {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::optional<std::int64_t> parse_int(std::string tok) {
  tok.erase(std::remove(tok.begin(), tok.end(), '_'), tok.end());
  if (tok.empty()) return std::nullopt;
  bool neg = false;
  std::size_t i = 0;
  if (tok[0] == '+' || tok[0] == '-') {
    neg = tok[0] == '-';
    i = 1;
  }
  int base = 10;
  if (tok.size() > i + 1 && tok[i] == '0' && (tok[i + 1] == 'x' || tok[i + 1] == 'X')) {
    base = 16;
    i += 2;
  }
  if (i >= tok.size()) return std::nullopt;
  const std::string digits = tok.substr(i);
  for (const char c : digits) {
    if (base == 16 ? !std::isxdigit(static_cast<unsigned char>(c))
                   : !std::isdigit(static_cast<unsigned char>(c))) {
      return std::nullopt;
    }
  }
  errno = 0;
  const unsigned long long mag = std::strtoull(digits.c_str(), nullptr, base);
  if (errno == ERANGE || mag > static_cast<unsigned long long>(INT64_MAX) + (neg ? 1 : 0)) {
    return std::nullopt;
  }
  return neg ? static_cast<std::int64_t>(0 - mag) : static_cast<std::int64_t>(mag);
}

// Removes a trailing `# comment` that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && in_str) {
      ++i;
    } else if (s[i] == '"') {
      in_str = !in_str;
    } else if (s[i] == '#' && !in_str) {
      return s.substr(0, i);
    }
  }
  return s;
}

KvValue parse_value(const std::string& raw, int line) {
  const std::string v = trim(raw);
  if (v.empty()) throw KvError(line, "missing value");
  KvValue out;
  out.line = line;
  if (v.front() == '"') {
    std::string s;
    std::size_t i = 1;
    for (; i < v.size() && v[i] != '"'; ++i) {
      if (v[i] == '\\' && i + 1 < v.size()) ++i;
      s += v[i];
    }
    if (i >= v.size()) throw KvError(line, "unterminated string");
    if (!trim(v.substr(i + 1)).empty()) throw KvError(line, "unexpected text after string");
    out.value = s;
    return out;
  }
  if (v.front() == '[') {
    if (v.back() != ']') throw KvError(line, "array must close on the same line");
    std::vector<std::int64_t> items;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) {
        if (ss.eof()) break;  // trailing comma
        throw KvError(line, "empty array element");
      }
      const auto n = parse_int(tok);
      if (!n) throw KvError(line, "array elements must be integers: '" + tok + "'");
      items.push_back(*n);
    }
    out.value = std::move(items);
    return out;
  }
  if (v == "true" || v == "false") {
    out.value = v == "true";
    return out;
  }
  if (const auto n = parse_int(v)) {
    out.value = *n;
    return out;
  }
  std::string f = v;
  f.erase(std::remove(f.begin(), f.end(), '_'), f.end());
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(f.c_str(), &end);
  if (end != f.c_str() && *end == '\0' && errno != ERANGE) {
    out.value = d;
    return out;
  }
  throw KvError(line, "cannot parse value '" + v + "'");
}

std::string type_name(const KvValue& v) {
  switch (v.value.index()) {
    case 0: return "integer";
    case 1: return "number";
    case 2: return "string";
    case 3: return "boolean";
    default: return "array";
  }
}

}  // namespace

KvFile KvFile::parse(const std::string& text) {
  KvFile f;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw KvError(n, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty() || !std::all_of(section.begin(), section.end(), is_key_char)) {
        throw KvError(n, "invalid section name '" + section + "'");
      }
      if (f.section_lines_.count(section)) throw KvError(n, "duplicate section [" + section + "]");
      f.sections_[section];
      f.section_lines_[section] = n;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw KvError(n, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty() || !std::all_of(key.begin(), key.end(), is_key_char)) {
      throw KvError(n, "invalid key '" + key + "'");
    }
    if (section.empty()) throw KvError(n, "key '" + key + "' outside any section");
    auto& sec = f.sections_[section];
    if (sec.count(key)) throw KvError(n, "duplicate key '" + key + "' in [" + section + "]");
    sec.emplace(key, parse_value(s.substr(eq + 1), n));
  }
  return f;
}

KvFile KvFile::read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KvError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const KvError& e) {
    throw KvError(0, path + ": " + e.what());
  }
}

const KvValue* KvFile::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool KvFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

namespace {

template <typename T>
std::optional<T> get(const KvValue* v, const std::string& key, const char* want) {
  if (v == nullptr) return std::nullopt;
  if (const T* p = std::get_if<T>(&v->value)) return *p;
  throw KvError(v->line, "'" + key + "' must be " + want + ", got " + type_name(*v));
}

}  // namespace

std::optional<std::int64_t> KvFile::integer(const std::string& section,
                                            const std::string& key) const {
  return get<std::int64_t>(find(section, key), key, "an integer");
}

std::optional<double> KvFile::number(const std::string& section, const std::string& key) const {
  const KvValue* v = find(section, key);
  if (v != nullptr) {
    if (const auto* i = std::get_if<std::int64_t>(&v->value)) return static_cast<double>(*i);
  }
  return get<double>(v, key, "a number");
}

std::optional<std::string> KvFile::string(const std::string& section,
                                          const std::string& key) const {
  return get<std::string>(find(section, key), key, "a string");
}

std::optional<bool> KvFile::boolean(const std::string& section, const std::string& key) const {
  return get<bool>(find(section, key), key, "a boolean");
}

std::optional<std::vector<std::int64_t>> KvFile::integers(const std::string& section,
                                                          const std::string& key) const {
  return get<std::vector<std::int64_t>>(find(section, key), key, "an integer array");
}

void KvFile::require_known(const std::map<std::string, std::vector<std::string>>& allowed) const {
  for (const auto& [name, keys] : sections_) {
    const auto a = allowed.find(name);
    if (a == allowed.end()) throw KvError(section_lines_.at(name), "unknown section [" + name + "]");
    for (const auto& [key, value] : keys) {
      if (std::find(a->second.begin(), a->second.end(), key) == a->second.end()) {
        throw KvError(value.line, "unknown key '" + key + "' in [" + name + "]");
      }
    }
  }
}

}  // namespace rvdsp
