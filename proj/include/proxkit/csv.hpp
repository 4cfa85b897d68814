// Copyright 2026 The Proxkit Authors
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

#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <string>
#include <vector>

#include "proxkit/errors.hpp"

namespace proxkit {

/// Shortest round-trippable decimal rendering used for all file output.
inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline double parse_csv_number(const std::string& field, const char* what,
                               long line_no) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) {
    throw MalformedRow("line " + std::to_string(line_no) + ": bad " + what +
                       " value '" + field + "'");
  }
  return value;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line of each row, for error reporting.
  std::vector<long> line_numbers;
};

/// Reads a headered CSV, skipping blank lines. Rows keep their raw fields.
inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  long line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (!have_header) {
      table.header = split_csv_line(line);
      have_header = true;
      continue;
    }
    table.rows.push_back(split_csv_line(line));
    table.line_numbers.push_back(line_no);
    if (table.rows.back().size() != table.header.size()) {
      throw MalformedRow("line " + std::to_string(line_no) + ": expected " +
                         std::to_string(table.header.size()) +
                         " fields, got " +
                         std::to_string(table.rows.back().size()));
    }
  }
  if (!have_header) throw EmptyFile("missing CSV header");
  return table;
}

/// Index of a required header column.
inline std::size_t column_index(const CsvTable& table, const std::string& name) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == name) return i;
  }
  throw MalformedRow("missing required column '" + name + "'");
}

inline bool has_column(const CsvTable& table, const std::string& name) {
  for (const std::string& h : table.header) {
    if (h == name) return true;
  }
  return false;
}

}  // namespace proxkit
