#include "nhscatter/report_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace nhs::io {

std::string format_number(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  if (x == 0) {
    return "0";
  }
  char buf[64];
  const double ax = std::abs(x);
  if (ax < 1e-3 || ax >= 1e6) {
    std::snprintf(buf, sizeof buf, "%.14e", x);
  } else {
    const int int_digits = static_cast<int>(std::floor(std::log10(ax))) + 1;
    std::snprintf(buf, sizeof buf, "%.*f", std::max(0, 15 - int_digits), x);
  }
  return buf;
}

double rounded(double x) {
  if (!std::isfinite(x)) {
    return x;
  }
  return std::stod(format_number(x));
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("row width does not match the column count");
  }
  rows.push_back(std::move(row));
}

std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) {
        return v;
      }
      std::string quoted = "\"";
      for (char c : v) {
        if (c == '"') {
          quoted += '"';
        }
        quoted += c;
      }
      return quoted + "\"";
    }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) {
        return format_number(v);  // JSON has no inf/nan literals
      }
      return rounded(v);
    }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

void write_csv(std::ostream& out, const Table& table, const std::optional<std::string>& comment) {
  if (comment) {
    out << "# " << *comment << '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << cell_text(row[i]);
    }
    out << '\n';
  }
}

nlohmann::ordered_json to_json(const Table& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[table.columns[i]] = cell_json(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace nhs::io
