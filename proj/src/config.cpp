#include "signcd/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace signcd {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::int64_t to_int(const std::string& key, std::string_view text) {
  text = trim(text);
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    // Accept integral values written in floating-point form, e.g. 1e5.
    const double d = to_double(key, text);
    if (d != std::floor(d) || std::abs(d) > 9.0e18) {
      throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
    }
    return static_cast<std::int64_t>(d);
  }
  return v;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key) != 0) {
      throw ConfigError(key, "duplicate key (line " + std::to_string(lineno) + ")");
    }
    cfg.values_[key] = value;
    cfg.lines_[key] = lineno;
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::optional<std::string> KeyValueConfig::find(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  used_.insert(key);
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) {
  auto v = find(key);
  if (!v) throw ConfigError(key, "required key is missing");
  return *v;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) {
  return find(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key) { return to_double(key, get_string(key)); }

double KeyValueConfig::get_double(const std::string& key, double fallback) {
  auto v = find(key);
  return v ? to_double(key, *v) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) { return to_int(key, get_string(key)); }

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) {
  auto v = find(key);
  return v ? to_int(key, *v) : fallback;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) {
  auto v = find(key);
  if (!v) return fallback;
  const auto i = to_int(key, *v);
  if (i < 0) throw ConfigError(key, "must be non-negative");
  return static_cast<std::uint64_t>(i);
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) {
  std::vector<double> out;
  const std::string raw = get_string(key);
  for (auto piece : split_list(raw)) out.push_back(to_double(key, piece));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::vector<std::int64_t> KeyValueConfig::get_ints(const std::string& key) {
  std::vector<std::int64_t> out;
  const std::string raw = get_string(key);
  for (auto piece : split_list(raw)) out.push_back(to_int(key, piece));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::vector<std::string> KeyValueConfig::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) {
    if (used_.count(k) == 0) out.push_back(k);
  }
  return out;
}

}  // namespace signcd
