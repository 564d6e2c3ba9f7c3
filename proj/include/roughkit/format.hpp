#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace roughkit {

/// Shortest decimal text that reads back to the identical double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

/// Parses a whole token as a double; nullopt on any trailing garbage.
inline std::optional<double> parse_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

/// Splits on runs of whitespace.
template <class Out>
void split_ws(std::string_view line, Out&& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out(line.substr(i, j - i));
    i = j;
  }
}

}  // namespace roughkit
