#include "repp/kv.hpp"

#include "repp/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

namespace repp {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void KeyValueBlock::set(std::string key, std::string value, int line) {
  lines_[key] = line;
  values_[std::move(key)] = std::move(value);
}

bool KeyValueBlock::has(std::string_view key) const {
  return values_.find(key) != values_.end();
}

const std::string& KeyValueBlock::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError("missing required key '" + std::string(key) + "'");
  return it->second;
}

std::optional<std::string> KeyValueBlock::find(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueBlock::get_or(std::string_view key, std::string fallback) const {
  auto v = find(key);
  return v ? *v : std::move(fallback);
}

int KeyValueBlock::line_of(std::string_view key) const {
  auto it = lines_.find(key);
  return it == lines_.end() ? 0 : it->second;
}

namespace {

std::string where(const KeyValueBlock& b, std::string_view key) {
  const int line = b.line_of(key);
  return line > 0 ? " (line " + std::to_string(line) + ")" : std::string();
}

}  // namespace

double KeyValueBlock::get_double(std::string_view key) const {
  const std::string& v = get(key);
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (!v.empty() && *end == '\0') return d;
  // Fractions such as 1/2.
  const auto slash = v.find('/');
  if (slash != std::string::npos && slash > 0 && slash + 1 < v.size()) {
    char* e1 = nullptr;
    char* e2 = nullptr;
    const std::string num = v.substr(0, slash), den = v.substr(slash + 1);
    const double p = std::strtod(num.c_str(), &e1);
    const double q = std::strtod(den.c_str(), &e2);
    if (*e1 == '\0' && *e2 == '\0' && q != 0.0) return p / q;
  }
  throw ConfigError("key '" + std::string(key) + "' is not a number: '" + v + "'" + where(*this, key));
}

double KeyValueBlock::get_double_or(std::string_view key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValueBlock::get_int(std::string_view key) const {
  const std::string& v = get(key);
  long long out = 0;
  // Accept scientific shorthand such as 1e6 for counts.
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec == std::errc() && ptr == v.data() + v.size()) return out;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (!v.empty() && *end == '\0' && d == static_cast<double>(static_cast<long long>(d)))
    return static_cast<long long>(d);
  throw ConfigError("key '" + std::string(key) + "' is not an integer: '" + v + "'" +
                    where(*this, key));
}

long long KeyValueBlock::get_int_or(std::string_view key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t KeyValueBlock::get_u64(std::string_view key) const {
  const std::string& v = get(key);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("key '" + std::string(key) + "' is not an unsigned 64-bit integer: '" +
                      v + "'" + where(*this, key));
  return out;
}

void KeyValueBlock::require_only(const std::vector<std::string>& allowed,
                                 std::string_view block_name) const {
  for (const auto& [k, v] : values_) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == k;
    if (!ok)
      throw ConfigError("unknown key '" + k + "' in " + std::string(block_name) + where(*this, k));
  }
}

std::string KeyValueBlock::to_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << '=' << v << '\n';
  return os.str();
}

bool SectionedConfig::has_section(std::string_view name) const {
  return sections.find(name) != sections.end();
}

const KeyValueBlock& SectionedConfig::section(std::string_view name) const {
  auto it = sections.find(name);
  if (it == sections.end()) throw ConfigError("missing section [" + std::string(name) + "]");
  return it->second;
}

SectionedConfig parse_sectioned(std::string_view text) {
  SectionedConfig cfg;
  KeyValueBlock* current = &cfg.root;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty() || line[0] == '#' || line[0] == ';') {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (name.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      if (cfg.sections.count(name))
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate section [" + name + "]");
      current = &cfg.sections[name];
    } else {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
      std::string key = trim(std::string_view(line).substr(0, eq));
      std::string value = trim(std::string_view(line).substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
      if (current->has(key))
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      current->set(std::move(key), std::move(value), line_no);
    }
    if (end == text.size()) break;
  }
  return cfg;
}

KeyValueBlock parse_key_values(std::string_view text) {
  SectionedConfig cfg = parse_sectioned(text);
  if (!cfg.sections.empty())
    throw ConfigError("section headers are not allowed in a flat key-value block");
  return cfg.root;
}

}  // namespace repp
