#pragma once

#include "signcd/errors.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace signcd {

// Configuration problem tied to a key path such as "sweep.budgets".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : InvalidArgument(key.empty() ? message : key + ": " + message), key_(key) {}
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Flat "dotted.key = value" text. '#' starts a comment; lists are
// comma-separated. Every lookup marks the key as consumed so that leftovers
// (typos) can be reported.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);

  [[nodiscard]] bool has(const std::string& key) const;
  std::optional<std::string> find(const std::string& key);

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  std::int64_t get_int(const std::string& key);
  std::int64_t get_int(const std::string& key, std::int64_t fallback);
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback);
  std::vector<double> get_doubles(const std::string& key);
  std::vector<std::int64_t> get_ints(const std::string& key);

  // Keys present in the text but never looked up.
  [[nodiscard]] std::vector<std::string> unused_keys() const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::set<std::string> used_;
};

}  // namespace signcd
