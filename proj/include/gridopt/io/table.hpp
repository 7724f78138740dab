#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gridopt/core/error.hpp"

namespace gridopt::io {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_fields(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Parses a real; accepts "inf", "+inf", "-inf" and "." decimals only.
inline std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf" || text == "Inf" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (text == "-inf" || text == "-Inf") return -std::numeric_limits<double>::infinity();
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || std::isnan(value)) return std::nullopt;
  return value;
}

// One comma-separated table with a header row. Cells are kept as strings and
// converted on access so error messages can name file, row and column.
class Table {
 public:
  Table() = default;
  Table(std::string name, std::vector<std::string> header, std::vector<std::vector<std::string>> rows)
      : name_(std::move(name)), header_(std::move(header)), rows_(std::move(rows)) {
    for (std::size_t i = 0; i < header_.size(); ++i) columns_[header_[i]] = i;
  }

  static Table parse(std::string name, std::string_view text) {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
      start = end == std::string_view::npos ? text.size() + 1 : end + 1;
      ++line_no;
      if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
      if (trim(line).empty() || trim(line).starts_with('#')) continue;
      auto fields = split_fields(line);
      if (header.empty()) {
        header = std::move(fields);
        continue;
      }
      if (fields.size() != header.size()) {
        fail(ErrorKind::InputError, name + " line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " fields, found " +
                                        std::to_string(fields.size()));
      }
      rows.push_back(std::move(fields));
    }
    if (header.empty()) fail(ErrorKind::InputError, name + ": missing header row");
    return Table(std::move(name), std::move(header), std::move(rows));
  }

  const std::string& name() const { return name_; }
  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  bool has_column(const std::string& column) const { return columns_.contains(column); }

  const std::string& text(std::size_t row, const std::string& column) const {
    auto it = columns_.find(column);
    if (it == columns_.end()) fail(ErrorKind::MissingInput, name_ + ": missing column '" + column + "'");
    return rows_.at(row)[it->second];
  }

  double real(std::size_t row, const std::string& column) const {
    const auto& cell = text(row, column);
    auto value = parse_real(cell);
    if (!value) {
      fail(ErrorKind::InputError, name_ + " row " + std::to_string(row + 1) + " column '" + column +
                                      "': not a number: '" + cell + "'");
    }
    return *value;
  }

  double real_or(std::size_t row, const std::string& column, double fallback) const {
    if (!has_column(column) || trim(text(row, column)).empty() || text(row, column) == ".") return fallback;
    return real(row, column);
  }

  long long integer(std::size_t row, const std::string& column) const {
    double value = real(row, column);
    if (value != std::floor(value) || !std::isfinite(value)) {
      fail(ErrorKind::InputError, name_ + " row " + std::to_string(row + 1) + " column '" + column +
                                      "': expected an integer");
    }
    return static_cast<long long>(value);
  }

  bool flag_or(std::size_t row, const std::string& column, bool fallback) const {
    if (!has_column(column)) return fallback;
    auto cell = trim(text(row, column));
    if (cell.empty() || cell == ".") return fallback;
    if (cell == "1" || cell == "true" || cell == "yes") return true;
    if (cell == "0" || cell == "false" || cell == "no") return false;
    fail(ErrorKind::InputError, name_ + " row " + std::to_string(row + 1) + " column '" + column +
                                    "': expected 0/1");
  }

 private:
  std::string name_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::map<std::string, std::size_t> columns_;
};

// Where input tables come from: a directory of <name>.csv files, or an
// in-memory map (tests).
class TableSource {
 public:
  virtual ~TableSource() = default;
  virtual bool has(const std::string& table) const = 0;
  virtual Table get(const std::string& table) const = 0;
  virtual std::string describe(const std::string& table) const { return table + ".csv"; }
};

class DirectorySource : public TableSource {
 public:
  explicit DirectorySource(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_)) {
      fail(ErrorKind::ConfigError, "input directory does not exist: " + dir_.string());
    }
  }

  bool has(const std::string& table) const override {
    return std::filesystem::exists(dir_ / (table + ".csv"));
  }

  Table get(const std::string& table) const override {
    std::ifstream in(dir_ / (table + ".csv"), std::ios::binary);
    if (!in) fail(ErrorKind::MissingInput, "cannot open " + describe(table));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return Table::parse(table + ".csv", buffer.str());
  }

  std::string describe(const std::string& table) const override {
    return (dir_ / (table + ".csv")).string();
  }

  const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

class MemorySource : public TableSource {
 public:
  MemorySource() = default;
  MemorySource(std::initializer_list<std::pair<const std::string, std::string>> tables) : tables_(tables) {}

  MemorySource& set(const std::string& table, std::string csv) {
    tables_[table] = std::move(csv);
    return *this;
  }
  MemorySource& erase(const std::string& table) {
    tables_.erase(table);
    return *this;
  }

  const std::map<std::string, std::string>& tables() const { return tables_; }

  bool has(const std::string& table) const override { return tables_.contains(table); }
  Table get(const std::string& table) const override {
    auto it = tables_.find(table);
    if (it == tables_.end()) fail(ErrorKind::MissingInput, "missing table " + table + ".csv");
    return Table::parse(table + ".csv", it->second);
  }

 private:
  std::map<std::string, std::string> tables_;
};

}  // namespace gridopt::io
