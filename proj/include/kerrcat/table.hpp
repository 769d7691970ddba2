// Copyright 2026 The kerrcat Authors
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

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace kerrcat {

/// Rectangular table of doubles with a metadata block. Row order is the
/// insertion order and is part of the output contract.
struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  SweepTable() = default;
  explicit SweepTable(std::vector<std::string> cols) : columns(std::move(cols)) {}

  void add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
      throw std::invalid_argument("SweepTable: row has " + std::to_string(row.size()) +
                                  " cells, expected " + std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
  }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw std::out_of_range("SweepTable: no column '" + name + "'");
  }

  double at(std::size_t row, const std::string& col) const { return rows.at(row)[column_index(col)]; }

  void set_meta(const std::string& key, std::string value) {
    for (auto& kv : metadata) {
      if (kv.first == key) {
        kv.second = std::move(value);
        return;
      }
    }
    metadata.emplace_back(key, std::move(value));
  }
};

/// 17 significant digits, locale independent ("nan"/"inf" spelled out).
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Metadata lines are emitted as "# key: value" comments ahead of the header.
inline std::string to_csv(const SweepTable& t) {
  std::ostringstream os;
  for (const auto& [k, v] : t.metadata) {
    std::istringstream lines(v);
    std::string line;
    bool first = true;
    while (std::getline(lines, line)) {
      os << "# " << (first ? k + ": " : std::string(k.size() + 2, ' ')) << line << '\n';
      first = false;
    }
    if (first) os << "# " << k << ":\n";
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
  return os.str();
}

inline nlohmann::ordered_json to_json(const SweepTable& t) {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) meta[k] = v;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (std::isfinite(row[i])) {
        r[t.columns[i]] = row[i];
      } else {
        r[t.columns[i]] = nullptr;
      }
    }
    rows.push_back(std::move(r));
  }
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  out["metadata"] = std::move(meta);
  out["columns"] = t.columns;
  out["rows"] = std::move(rows);
  return out;
}

}  // namespace kerrcat
