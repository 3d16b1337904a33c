#pragma once

// Record model shared by every subcommand: a parameter map plus a list of
// homogeneous rows, written as CSV or JSON.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace partial_search::cli {

inline constexpr const char* kSchemaVersion = "1";

/// A number printed with a fixed count of decimals (table modes).
struct Fixed {
  double value;
  int decimals;
};

using Value = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, Fixed, std::string>;
using Row = std::vector<std::pair<std::string, Value>>;

struct OutputRecord {
  std::string command;
  Row parameters;
  std::vector<Row> rows;
};

inline std::string format_fixed(const Fixed& f) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", f.decimals, f.value);
  return buf;
}

inline nlohmann::ordered_json to_json(const Value& v) {
  using nlohmann::ordered_json;
  return std::visit(
      [](const auto& x) -> ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(x)) return nullptr;
          return x;
        } else if constexpr (std::is_same_v<T, Fixed>) {
          if (!std::isfinite(x.value)) return nullptr;
          return std::strtod(format_fixed(x).c_str(), nullptr);
        } else {
          return x;
        }
      },
      v);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Doubles use the shortest text that reads back to the same value, which is
/// what the JSON writer emits too.
inline std::string to_csv_field(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(x)) return "";
          return nlohmann::json(x).dump();
        } else if constexpr (std::is_same_v<T, Fixed>) {
          if (!std::isfinite(x.value)) return "";
          return format_fixed(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return csv_escape(x);
        } else {
          return std::to_string(x);
        }
      },
      v);
}

inline void write_json(std::ostream& os, const OutputRecord& rec) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = rec.command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rec.parameters) params[k] = to_json(v);
  doc["parameters"] = params;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const Row& row : rec.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (const auto& [k, v] : row) r[k] = to_json(v);
    rows.push_back(std::move(r));
  }
  doc["rows"] = rows;
  os << doc.dump(2) << '\n';
}

/// One comment line carrying the schema version and parameters, then a header
/// row and the data rows.
inline void write_csv(std::ostream& os, const OutputRecord& rec) {
  os << "# schema_version=" << kSchemaVersion << " command=" << rec.command;
  for (const auto& [k, v] : rec.parameters) os << ' ' << k << '=' << to_csv_field(v);
  os << '\n';
  if (rec.rows.empty()) return;
  for (std::size_t i = 0; i < rec.rows.front().size(); ++i) {
    os << (i ? "," : "") << rec.rows.front()[i].first;
  }
  os << '\n';
  for (const Row& row : rec.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << to_csv_field(row[i].second);
    os << '\n';
  }
}

}  // namespace partial_search::cli
