// Copyright 2026 The memloco Authors
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

#include <string>
#include <vector>

namespace mloc::io {

/// Comment lines (`# ...`), one header row and string cells. Fields holding
/// commas, quotes or newlines are quoted as in RFC 4180.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws FormatError when absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  void add_row(std::vector<std::string> row);
};

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

std::string write_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

void save_csv(const CsvTable& table, const std::string& path);
CsvTable load_csv(const std::string& path);

}  // namespace mloc::io
