// SPDX-License-Identifier: Apache-2.0

#include "mmwee/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

namespace mmwee {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("Table::add: row has " + std::to_string(row.size()) +
                                " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

struct CsvCell {
  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(long long v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_number(v); }
  std::string operator()(const std::string& v) const { return csv_escape(v); }
};

struct JsonCell {
  nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  nlohmann::ordered_json operator()(long long v) const { return v; }
  nlohmann::ordered_json operator()(double v) const {
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(format_number(v).c_str(), nullptr);
  }
  nlohmann::ordered_json operator()(const std::string& v) const { return v; }
};

}  // namespace

void write_csv(std::ostream& os, const nlohmann::json& metadata, const Table& table) {
  os << "# " << metadata.dump() << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) os << ',';
    os << csv_escape(table.columns[c]);
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) os << ',';
      os << std::visit(CsvCell{}, row[c]);
    }
    os << '\n';
  }
}

nlohmann::ordered_json table_to_json(const nlohmann::json& metadata, const Table& table) {
  nlohmann::ordered_json out;
  out["metadata"] = nlohmann::ordered_json::parse(metadata.dump());
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      obj[table.columns[c]] = std::visit(JsonCell{}, row[c]);
    }
    rows.push_back(std::move(obj));
  }
  out["rows"] = std::move(rows);
  return out;
}

void write_json(std::ostream& os, const nlohmann::json& metadata, const Table& table) {
  os << table_to_json(metadata, table).dump(2) << '\n';
}

}  // namespace mmwee
