#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "rankmetrics/delimited.hpp"
#include "rankmetrics/error.hpp"

namespace rankmetrics {

// Flat `key = value` configuration with optional `[section]` headers.
// Keys are stored section-qualified ("synth.seed"); command-line overrides are
// stored bare and win over anything read from a file. '-' and '_' are
// interchangeable in key names.
class Config {
 public:
  static std::string normalize_key(std::string_view key) {
    std::string out(key);
    for (auto& c : out)
      if (c == '-') c = '_';
    return out;
  }

  static Config parse(std::string_view text, std::string_view origin = "config") {
    Config cfg;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string_view s = raw;
      if (auto hash = s.find_first_of("#;"); hash != std::string_view::npos) s = s.substr(0, hash);
      s = trim(s);
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ConfigError(fmt::format("{}:{}: unterminated section header", origin, line));
        section = normalize_key(trim(s.substr(1, s.size() - 2)));
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string_view::npos) throw ConfigError(fmt::format("{}:{}: expected 'key = value'", origin, line));
      const auto key = normalize_key(trim(s.substr(0, eq)));
      if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", origin, line));
      const auto value = std::string(trim(s.substr(eq + 1)));
      cfg.file_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
  }

  static Config load(const std::string& path) { return parse(read_file(path), path); }

  void set_override(std::string_view key, std::string value) { overrides_[normalize_key(key)] = std::move(value); }

  // Override for `key`, else "section.key" from the file, else bare `key`.
  std::optional<std::string> get(std::string_view section, std::string_view key) const {
    const auto k = normalize_key(key);
    if (auto it = overrides_.find(k); it != overrides_.end()) return it->second;
    if (!section.empty())
      if (auto it = file_.find(normalize_key(section) + "." + k); it != file_.end()) return it->second;
    if (auto it = file_.find(k); it != file_.end()) return it->second;
    return std::nullopt;
  }

  double get_double(std::string_view section, std::string_view key, double fallback) const {
    auto v = get(section, key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const double d = std::stod(*v, &used);
      if (used != v->size()) throw std::invalid_argument("trailing");
      return d;
    } catch (const std::logic_error&) {
      throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, *v));
    }
  }

  std::int64_t get_int(std::string_view section, std::string_view key, std::int64_t fallback) const {
    auto v = get(section, key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const long long i = std::stoll(*v, &used);
      if (used != v->size()) throw std::invalid_argument("trailing");
      return i;
    } catch (const std::logic_error&) {
      throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, *v));
    }
  }

  std::vector<std::string> get_list(std::string_view section, std::string_view key) const {
    std::vector<std::string> out;
    auto v = get(section, key);
    if (!v) return out;
    std::string_view rest = *v;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      auto item = trim(rest.substr(0, comma));
      if (!item.empty()) out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  }

  // Effective entries, file first then overrides, sorted by key.
  std::map<std::string, std::string> entries() const {
    auto out = file_;
    for (const auto& [k, v] : overrides_) out["override." + k] = v;
    return out;
  }

  // FNV-1a over the canonical "key=value\n" listing of entries().
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [k, v] : entries()) {
      for (char c : k + "=" + v + "\n") {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
      }
    }
    return h;
  }

 private:
  static std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> file_;
  std::map<std::string, std::string> overrides_;
};

}  // namespace rankmetrics
