// Copyright 2026 The Coins Authors
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

#ifndef COINS_UTIL_CSV_H_
#define COINS_UTIL_CSV_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace coins {

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double x);
double ParseDouble(std::string_view s);

// RFC 4180 style: fields containing a comma, quote or newline are quoted,
// quotes doubled. Rows end with '\n'.
std::string CsvEscape(std::string_view field);
std::string CsvLine(const std::vector<std::string>& fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws std::out_of_range when absent.
  size_t Column(std::string_view name) const;
  const std::string& Get(size_t row, std::string_view name) const {
    return rows[row][Column(name)];
  }
  std::string ToString() const;
};

// Parses CSV text whose first row is the header. Throws ValidationError on
// ragged rows or unterminated quotes.
CsvTable ParseCsv(std::string_view text);
CsvTable ReadCsvFile(const std::string& path);
void WriteCsvFile(const CsvTable& table, const std::string& path);

}  // namespace coins

#endif  // COINS_UTIL_CSV_H_
