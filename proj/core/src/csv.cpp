// Copyright 2026 The Augerino Authors
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
#include "augerino/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "augerino/error.hpp"

namespace augerino {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) {
  columns_.push_back("version");
  columns_.insert(columns_.end(), columns.begin(), columns.end());
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() + 1 != columns_.size()) {
    throw DimensionError("csv: row of " + std::to_string(values.size()) + " values for " +
                         std::to_string(columns_.size() - 1) + " columns");
  }
  std::vector<double> row{static_cast<double>(kCsvVersion)};
  row.insert(row.end(), values.begin(), values.end());
  rows_.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw IndexError("csv: no column '" + name + "'");
  return static_cast<std::size_t>(it - columns_.begin());
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_real(row[i]);
    out += "\n";
  }
  return out;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << to_string();
  if (!f) throw IoError("error while writing '" + path + "'");
}

}  // namespace augerino
