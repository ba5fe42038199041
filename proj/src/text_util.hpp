// Copyright 2026 The Stagegraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small helpers shared by the line-oriented text formats.

#ifndef STAGEGRAPH_SRC_TEXT_UTIL_HPP_
#define STAGEGRAPH_SRC_TEXT_UTIL_HPP_

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stagegraph/common.hpp"

namespace stagegraph::text {

/// Splits on ASCII whitespace after dropping a `#` comment.
inline std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) {
    line = line.substr(0, hash);
  }
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r' || line[i] == '\n')) {
      ++i;
    }
    std::size_t start = i;
    while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' ||
                                line[i] == '\r' || line[i] == '\n')) {
      ++i;
    }
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view token) {
  std::uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      token.empty()) {
    return std::nullopt;
  }
  return value;
}

inline std::uint64_t expect_uint(std::string_view token, std::size_t line,
                                 std::string_view what) {
  auto value = parse_uint(token);
  if (!value) {
    throw ParseError(line, "expected unsigned integer for " +
                               std::string(what) + ", got '" +
                               std::string(token) + "'");
  }
  return *value;
}

/// Parses `<lo>..<hi>`.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_range(
    std::string_view token) {
  auto dots = token.find("..");
  if (dots == std::string_view::npos) return std::nullopt;
  auto lo = parse_uint(token.substr(0, dots));
  auto hi = parse_uint(token.substr(dots + 2));
  if (!lo || !hi) return std::nullopt;
  return std::make_pair(*lo, *hi);
}

/// Reads the whole stream.
inline std::string slurp(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

/// Iterates lines of `text`, calling `f(line_number, line)`.
template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    f(line_no, text.substr(pos, end - pos));
    if (end == text.size()) break;
    pos = end + 1;
  }
}

}  // namespace stagegraph::text

#endif  // STAGEGRAPH_SRC_TEXT_UTIL_HPP_
