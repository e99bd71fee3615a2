#include "stm/config.hpp"

#include <charconv>
#include <cmath>

#include "stm/detail/strings.hpp"
#include "stm/error.hpp"

namespace stm {

Config Config::load(const std::string& path) { return parse(detail::read_file(path), path); }

Config Config::parse(std::string_view text, const std::string& origin) {
  Config cfg;
  int line_no = 0;
  for (auto raw : detail::split(text, '\n')) {
    ++line_no;
    auto line = detail::strip_comment(raw);
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + ": expected 'key = value'");
    auto key = std::string(detail::trim(line.substr(0, eq)));
    auto value = std::string(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw ValidationError(where + ": missing key");
    if (cfg.values_.contains(key)) throw ValidationError(where + ": duplicate key '" + key + "'");
    cfg.values_[key] = {std::move(value), where};
  }
  return cfg;
}

void Config::set(const std::string& key, std::string value, std::string origin) {
  values_[key] = {std::move(value), std::move(origin)};
}

void Config::require_known(const std::set<std::string>& known) const {
  for (const auto& [key, entry] : values_)
    if (!known.contains(key)) throw ValidationError(entry.origin + ": unknown key '" + key + "'");
}

std::string Config::where(const std::string& key) const {
  auto it = values_.find(key);
  return (it == values_.end() ? std::string("<default>") : it->second.origin) + ": " + key;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second.value;
}

namespace {

template <typename T>
T parse_number(std::string_view text, const std::string& where, const char* what) {
  text = detail::trim(text);
  T out{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || p != text.data() + text.size())
    throw ValidationError(where + ": expected " + what + ", got '" + std::string(text) + "'");
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(out)) throw ValidationError(where + ": value must be finite");
  return out;
}

}  // namespace

int Config::get_int(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<int>(it->second.value, where(key), "an integer");
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<double>(it->second.value, where(key), "a number");
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto v = detail::to_lower(it->second.value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError(where(key) + ": expected a boolean, got '" + it->second.value + "'");
}

std::optional<std::vector<double>> Config::get_doubles(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  std::vector<double> out;
  for (auto part : detail::split(it->second.value, ',')) out.push_back(parse_number<double>(part, where(key), "a number"));
  return out;
}

}  // namespace stm
