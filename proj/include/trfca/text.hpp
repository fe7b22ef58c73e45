#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace trfca::detail {

inline std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("expected a nonnegative integer for " + std::string(what) + ", got '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::uint64_t> parse_uint_list(std::string_view s, char sep, std::string_view what) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(parse_uint(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start), what));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace trfca::detail
