// Copyright 2026 The avplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal reader for the flat comma-separated files used by avplan.
// No quoting: none of the schemas carry embedded commas.

#ifndef AVPLAN_SRC_CSV_UTIL_H_
#define AVPLAN_SRC_CSV_UTIL_H_

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "avplan/error.h"

namespace avplan::csv {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

struct Row {
  std::size_t line = 0;  // 1-based line number in the document
  std::vector<std::string_view> fields;
};

// Splits a document into trimmed rows, skipping blank lines. The first
// non-blank row must equal `header` (field-wise) and is not returned.
inline std::vector<Row> read(std::string_view text,
                             const std::vector<std::string_view>& header,
                             std::string_view what) {
  std::vector<Row> rows;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    Row row{line_no, {}};
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      row.fields.push_back(trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      if (row.fields != header) {
        throw DataError(fmt::format("{}: line {}: expected header '{}'", what,
                                    line_no, fmt::join(header, ",")));
      }
      have_header = true;
    } else {
      if (row.fields.size() != header.size()) {
        throw DataError(fmt::format("{}: line {}: expected {} fields, got {}",
                                    what, line_no, header.size(),
                                    row.fields.size()));
      }
      rows.push_back(std::move(row));
    }
    if (end == text.size()) break;
  }
  if (!have_header) {
    throw DataError(fmt::format("{}: missing header '{}'", what,
                                fmt::join(header, ",")));
  }
  return rows;
}

inline double to_double(std::string_view field, std::size_t line,
                        std::string_view what) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw DataError(
        fmt::format("{}: line {}: '{}' is not a number", what, line, field));
  }
  return value;
}

inline long to_long(std::string_view field, std::size_t line,
                    std::string_view what) {
  long value = 0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw DataError(
        fmt::format("{}: line {}: '{}' is not an integer", what, line, field));
  }
  return value;
}

}  // namespace avplan::csv

#endif  // AVPLAN_SRC_CSV_UTIL_H_
