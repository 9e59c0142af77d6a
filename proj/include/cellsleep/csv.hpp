// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cellsleep {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row

  std::optional<std::size_t> column(const std::string& name) const;
};

/// Comma-separated, header row first, double quotes for escaping. Blank lines
/// are skipped. Rows with the wrong field count raise RowError.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Shortest text that reads back to the same double.
std::string format_number(double v);

double parse_double_field(const std::string& text, std::size_t line,
                          const std::string& column);
long long parse_int_field(const std::string& text, std::size_t line,
                          const std::string& column);

}  // namespace cellsleep
