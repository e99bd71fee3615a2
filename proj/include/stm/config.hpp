#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace stm {

/// Flat `key = value` file; `#` starts a comment. Every value remembers where it came
/// from so validation errors can name the file and line (or the overriding flag).
class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(std::string_view text, const std::string& origin);

  /// Later sets win; used for command-line overrides.
  void set(const std::string& key, std::string value, std::string origin);
  bool has(const std::string& key) const { return values_.contains(key); }
  /// Throws ValidationError for any key outside `known`.
  void require_known(const std::set<std::string>& known) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated reals; a single value is returned as a one-element list.
  std::optional<std::vector<double>> get_doubles(const std::string& key) const;

  /// "origin: key: message", for errors raised after reading a value.
  std::string where(const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    std::string origin;
  };
  std::map<std::string, Entry> values_;
};

}  // namespace stm
