#pragma once

// Helpers for the `family:key=value,key=value` strings used by the CLI.

#include <charconv>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <fmt/format.h>

#include "dlvp/errors.hpp"

namespace dlvp::detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::optional<std::pair<std::string, std::string>> split_key_value(std::string_view s) {
  auto eq = s.find('=');
  if (eq == std::string_view::npos) return std::nullopt;
  return std::make_pair(std::string(trim(s.substr(0, eq))), std::string(trim(s.substr(eq + 1))));
}

/// "family:rest" -> {family, rest}; a bare "family" gives an empty rest.
inline std::pair<std::string, std::string_view> split_spec(std::string_view spec) {
  spec = trim(spec);
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) return {std::string(spec), {}};
  return {std::string(trim(spec.substr(0, colon))), trim(spec.substr(colon + 1))};
}

inline std::map<std::string, std::string> parse_params(std::string_view params) {
  std::map<std::string, std::string> out;
  while (!params.empty()) {
    auto comma = params.find(',');
    auto item = trim(params.substr(0, comma));
    params = comma == std::string_view::npos ? std::string_view{} : params.substr(comma + 1);
    if (item.empty()) continue;
    auto kv = split_key_value(item);
    if (!kv) throw UsageError(fmt::format("expected key=value, got '{}'", item));
    out[kv->first] = kv->second;
  }
  return out;
}

inline double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "inf" || text == "infinity" || text == "Inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(fmt::format("{}: '{}' is not a number", what, text));
  }
  return v;
}

inline int parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(fmt::format("{}: '{}' is not an integer", what, text));
  }
  return v;
}

}  // namespace dlvp::detail
