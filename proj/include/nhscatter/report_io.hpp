#pragma once

// Tabular report output shared by the CLI commands: CSV with a header row,
// or JSON with the same keys. Numbers are printed with 15 significant digits
// and the JSON values are the parsed-back CSV strings, so both formats carry
// identical values.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace nhs::io {

enum class Format { csv, json };

/// 15 significant digits; scientific when |x| < 1e-3 or |x| >= 1e6.
std::string format_number(double x);

/// Value of `x` after a round trip through format_number.
double rounded(double x);

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

std::string cell_text(const Cell& cell);
nlohmann::ordered_json cell_json(const Cell& cell);

/// `comment`, when set, is written as a leading "# ..." line.
void write_csv(std::ostream& out, const Table& table,
               const std::optional<std::string>& comment = std::nullopt);

/// Array of row objects keyed by column name.
nlohmann::ordered_json to_json(const Table& table);

/// ISO-8601 UTC timestamp for report headers.
std::string timestamp_utc();

}  // namespace nhs::io
