// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/csv.hpp"

#include <boost/tokenizer.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <system_error>

#include "cellsleep/errors.hpp"

namespace cellsleep {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, std::size_t lineno) {
  using Sep = boost::escaped_list_separator<char>;
  std::vector<std::string> out;
  try {
    boost::tokenizer<Sep> tok(line, Sep('\\', ',', '"'));
    for (const auto& t : tok) out.push_back(trim(t));
  } catch (const boost::escaped_list_error& e) {
    throw RowError(lineno, std::string("malformed field: ") + e.what());
  }
  return out;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::nullopt;
}

CsvTable parse_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (!have_header) {
      // tolerate a UTF-8 byte order mark
      if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      t.header = split(line, lineno);
      have_header = true;
      continue;
    }
    auto fields = split(line, lineno);
    if (fields.size() != t.header.size())
      throw RowError(lineno, "expected " + std::to_string(t.header.size()) +
                                 " fields, found " + std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
    t.lines.push_back(lineno);
  }
  if (!have_header) throw RowError(1, "missing header row");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return parse_csv(in);
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double_field(const std::string& text, std::size_t line,
                          const std::string& column) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw RowError(line, column + ": not a number: '" + text + "'");
  return v;
}

long long parse_int_field(const std::string& text, std::size_t line,
                          const std::string& column) {
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw RowError(line, column + ": not an integer: '" + text + "'");
  return v;
}

}  // namespace cellsleep
