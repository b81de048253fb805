#pragma once

// Tabular output in three formats. Data rows never carry run-specific content
// (timestamps, hostnames), so identical input gives byte-identical output.
//
//   table   aligned columns for reading; a single-row table prints key/value pairs
//   csv     `# key = value` metadata lines, one header row, '.' decimal point
//   ndjson  one JSON object per row; the first line is {"meta": {...}}

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace spdc {

inline constexpr int kOutputFormatVersion = 1;

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table: row width does not match header");
    rows.push_back(std::move(row));
  }
};

inline Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

inline std::string format_number(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string cell_text(const Cell& c, const char* null_text) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return null_text;
        else if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      c);
}

namespace detail {
inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else return v;
      },
      c);
}
}  // namespace detail

inline void write_csv(std::ostream& os, const Table& t) {
  os << "# format_version = " << kOutputFormatVersion << '\n';
  for (const auto& [k, v] : t.meta) os << "# " << k << " = " << v << '\n';
  for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << detail::csv_escape(t.columns[j]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << detail::csv_escape(cell_text(row[j], ""));
    os << '\n';
  }
}

inline void write_ndjson(std::ostream& os, const Table& t) {
  nlohmann::ordered_json meta;
  meta["format_version"] = kOutputFormatVersion;
  for (const auto& [k, v] : t.meta) meta[k] = v;
  os << nlohmann::ordered_json{{"meta", meta}}.dump() << '\n';
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t j = 0; j < row.size(); ++j) obj[t.columns[j]] = detail::cell_json(row[j]);
    os << obj.dump() << '\n';
  }
}

inline void write_table(std::ostream& os, const Table& t) {
  for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << '\n';
  if (t.rows.size() == 1) {
    std::size_t w = 0;
    for (const auto& c : t.columns) w = std::max(w, c.size());
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      os << t.columns[j] << std::string(w - t.columns[j].size() + 2, ' ') << cell_text(t.rows[0][j], "-") << '\n';
    }
    return;
  }
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t j = 0; j < t.columns.size(); ++j) width[j] = t.columns[j].size();
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], cell_text(row[j], "-").size());
  }
  auto line = [&](auto&& text_of) {
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      const std::string s = text_of(j);
      os << (j ? "  " : "") << std::string(width[j] - s.size(), ' ') << s;
    }
    os << '\n';
  };
  line([&](std::size_t j) { return t.columns[j]; });
  for (const auto& row : t.rows) line([&](std::size_t j) { return cell_text(row[j], "-"); });
}

inline void write_output(std::ostream& os, const Table& t, const std::string& format) {
  if (format == "csv") write_csv(os, t);
  else if (format == "ndjson") write_ndjson(os, t);
  else if (format == "table") write_table(os, t);
  else throw std::invalid_argument("unknown output format '" + format + "'");
}

}  // namespace spdc
