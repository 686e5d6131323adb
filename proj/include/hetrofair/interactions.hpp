// Copyright 2026 The HetroFair Authors
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

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hetrofair/common.hpp"

namespace hetrofair {

// One implicit-feedback event. Label and timestamp are optional per row.
struct Interaction {
  std::string user;
  std::string item;
  std::string label;  // empty = absent
  std::optional<std::int64_t> timestamp;
};

enum class Delimiter { kCsv, kTsv };

// Declared column order for interaction files, e.g. "user,item,label".
// `user` and `item` are mandatory; `label`, `timestamp` and `_` (skip a
// column) are optional. Rows may omit trailing optional columns.
struct TableFormat {
  Delimiter delimiter = Delimiter::kTsv;
  int user_col = 0;
  int item_col = 1;
  int label_col = -1;
  int timestamp_col = -1;

  char delimiter_char() const { return delimiter == Delimiter::kCsv ? ',' : '\t'; }
  int required_columns() const { return std::max(user_col, item_col) + 1; }

  static TableFormat parse(const std::string& delimiter_name, const std::string& columns) {
    TableFormat fmt;
    if (delimiter_name == "csv") {
      fmt.delimiter = Delimiter::kCsv;
    } else if (delimiter_name == "tsv") {
      fmt.delimiter = Delimiter::kTsv;
    } else {
      throw ValidationError("unknown format '" + delimiter_name + "' (expected csv or tsv)");
    }
    fmt.user_col = fmt.item_col = fmt.label_col = fmt.timestamp_col = -1;
    int col = 0;
    std::size_t pos = 0;
    while (pos <= columns.size()) {
      const std::size_t comma = columns.find(',', pos);
      const std::string name = columns.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (name == "user") {
        fmt.user_col = col;
      } else if (name == "item") {
        fmt.item_col = col;
      } else if (name == "label") {
        fmt.label_col = col;
      } else if (name == "timestamp") {
        fmt.timestamp_col = col;
      } else if (name == "_") {
        // skipped column
      } else {
        throw ValidationError("unknown column '" + name + "' in column spec '" + columns + "'");
      }
      ++col;
      if (comma == std::string::npos) {
        break;
      }
      pos = comma + 1;
    }
    if (fmt.user_col < 0 || fmt.item_col < 0) {
      throw ValidationError("column spec must name both 'user' and 'item'");
    }
    return fmt;
  }
};

namespace detail {

inline void split_fields(std::string_view line, char delim, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(delim, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace detail

// Reads one interaction per line; `#`-prefixed lines and blank lines are
// ignored. Duplicate (user, item) pairs collapse to a single interaction,
// keeping the first label/timestamp seen.
inline std::vector<Interaction> load_interactions(std::istream& in, const TableFormat& fmt,
                                                  const std::string& source_name = "<stream>") {
  std::vector<Interaction> result;
  std::unordered_map<std::string, std::unordered_set<std::string>> seen;
  std::vector<std::string_view> fields;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') {
      continue;
    }
    detail::split_fields(line, fmt.delimiter_char(), fields);
    if (static_cast<int>(fields.size()) < fmt.required_columns()) {
      throw DataError(source_name + ":" + std::to_string(line_no) + ": expected at least " +
                      std::to_string(fmt.required_columns()) + " columns, got " +
                      std::to_string(fields.size()));
    }
    Interaction it;
    it.user = std::string(fields[fmt.user_col]);
    it.item = std::string(fields[fmt.item_col]);
    if (it.user.empty() || it.item.empty()) {
      throw DataError(source_name + ":" + std::to_string(line_no) + ": empty user or item id");
    }
    if (fmt.label_col >= 0 && fmt.label_col < static_cast<int>(fields.size())) {
      it.label = std::string(fields[fmt.label_col]);
    }
    if (fmt.timestamp_col >= 0 && fmt.timestamp_col < static_cast<int>(fields.size()) &&
        !fields[fmt.timestamp_col].empty()) {
      std::int64_t ts = 0;
      const auto* begin = fields[fmt.timestamp_col].data();
      const auto* end = begin + fields[fmt.timestamp_col].size();
      const auto [ptr, ec] = std::from_chars(begin, end, ts);
      if (ec != std::errc() || ptr != end) {
        throw DataError(source_name + ":" + std::to_string(line_no) + ": malformed timestamp '" +
                        std::string(fields[fmt.timestamp_col]) + "'");
      }
      it.timestamp = ts;
    }
    if (seen[it.user].insert(it.item).second) {
      result.push_back(std::move(it));
    }
  }
  if (result.empty()) {
    throw DataError(source_name + ": empty result (no interactions)");
  }
  return result;
}

inline std::vector<Interaction> load_interactions(const std::string& path, const TableFormat& fmt) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open interaction file '" + path + "'");
  }
  return load_interactions(in, fmt, path);
}

// Writes canonical column order: user, item[, label][, timestamp]. Trailing
// optional columns are omitted per row when absent.
inline void write_interactions(std::ostream& out, const std::vector<Interaction>& interactions,
                               Delimiter delimiter = Delimiter::kTsv) {
  const char d = delimiter == Delimiter::kCsv ? ',' : '\t';
  for (const auto& it : interactions) {
    out << it.user << d << it.item;
    if (!it.label.empty() || it.timestamp.has_value()) {
      out << d << it.label;
    }
    if (it.timestamp.has_value()) {
      out << d << *it.timestamp;
    }
    out << '\n';
  }
}

}  // namespace hetrofair
