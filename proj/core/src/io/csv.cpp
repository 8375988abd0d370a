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

#include "mloc/io/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mloc/common/error.hpp"

namespace mloc::io {
namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (const char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += quote(cells[i]);
  }
  return line;
}

// Splits one record starting at `pos`, which is advanced past its line break.
std::vector<std::string> read_record(const std::string& text, std::size_t& pos) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  while (pos < text.size()) {
    const char c = text[pos++];
    if (quoted) {
      if (c == '"') {
        if (pos < text.size() && text[pos] == '"') {
          cells.back() += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else if (c == '\n') {
      return cells;
    } else if (c != '\r') {
      cells.back() += c;
    }
  }
  if (quoted) throw FormatError("unterminated quoted CSV field");
  return cells;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw FormatError("CSV has no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const std::string& cell = rows.at(row).at(column(name));
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) throw FormatError("CSV cell '" + cell + "' is not a number");
  return v;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw FormatError("CSV row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string write_csv(const CsvTable& table) {
  std::string out;
  for (const std::string& c : table.comments) out += "# " + c + "\n";
  out += join(table.header) + "\n";
  for (const auto& row : table.rows) out += join(row) + "\n";
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    if (!have_header && text[pos] == '#') {
      const std::size_t end = text.find('\n', pos);
      std::string line = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      line.erase(0, line.rfind("# ", 0) == 0 ? 2 : 1);
      table.comments.push_back(line);
      pos = end == std::string::npos ? text.size() : end + 1;
      continue;
    }
    std::vector<std::string> record = read_record(text, pos);
    if (!have_header) {
      table.header = std::move(record);
      have_header = true;
    } else {
      if (record.size() != table.header.size()) {
        throw FormatError("CSV row " + std::to_string(table.rows.size() + 1) + " has " + std::to_string(record.size()) +
                          " fields, expected " + std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(record));
    }
  }
  if (!have_header) throw FormatError("CSV has no header row");
  return table;
}

void save_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out << write_csv(table);
}

CsvTable load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace mloc::io
