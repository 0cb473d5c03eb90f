// Flat key-value text blocks and INI-style sectioned files.
//
// Grammar (one entry per line):
//   line    := blank | comment | section | entry
//   comment := ('#' | ';') any*
//   section := '[' name ']'
//   entry   := key '=' value
// Numeric values may be decimals, scientific notation or fractions p/q.
// Keys and values are trimmed. Keys are case sensitive. A key may appear
// once per section.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace repp {

class KeyValueBlock {
 public:
  KeyValueBlock() = default;

  void set(std::string key, std::string value, int line = 0);
  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;  // ConfigError if missing
  std::optional<std::string> find(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key) const;
  double get_double_or(std::string_view key, double fallback) const;
  long long get_int(std::string_view key) const;
  long long get_int_or(std::string_view key, long long fallback) const;
  std::uint64_t get_u64(std::string_view key) const;
  int line_of(std::string_view key) const;

  /// Throws ConfigError naming the first key not in `allowed`.
  void require_only(const std::vector<std::string>& allowed,
                    std::string_view block_name) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return values_; }

  /// Serialised form, keys in lexicographic order.
  std::string to_text() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::map<std::string, int, std::less<>> lines_;
};

struct SectionedConfig {
  KeyValueBlock root;  // entries before the first section header
  std::map<std::string, KeyValueBlock, std::less<>> sections;

  bool has_section(std::string_view name) const;
  const KeyValueBlock& section(std::string_view name) const;
};

KeyValueBlock parse_key_values(std::string_view text);
SectionedConfig parse_sectioned(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

}  // namespace repp
