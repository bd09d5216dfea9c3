// SPDX-License-Identifier: Apache-2.0
//
// Tabular output: CSV with a metadata comment line, and the equivalent JSON.

#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace mmwee {

/// An empty cell is written as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument when the row width differs from columns.
  void add(std::vector<Cell> row);
};

/// Shortest general-format rendering with 12 significant digits, '.' decimal.
/// Non-finite values render as "inf", "-inf" or "nan".
std::string format_number(double x);

/// First line "# " + compact metadata JSON, then the header and one line per row.
void write_csv(std::ostream& os, const nlohmann::json& metadata, const Table& table);

/// {"metadata": ..., "rows": [{column: value, ...}, ...]}; doubles are rounded
/// to 12 significant digits so both formats carry the same values.
nlohmann::ordered_json table_to_json(const nlohmann::json& metadata, const Table& table);

void write_json(std::ostream& os, const nlohmann::json& metadata, const Table& table);

}  // namespace mmwee
