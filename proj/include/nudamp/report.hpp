#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace nudamp {

inline constexpr const char* kVersion = "0.1.0";

/// Scientific notation, 9 significant digits. Extreme exponents (1e-55)
/// survive as written; nothing is flushed to zero.
inline std::string format_sci9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

using Cell = std::variant<double, std::int64_t, std::string>;

inline std::string cell_to_string(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_sci9(std::get<double>(c));
    if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
    return std::get<std::string>(c);
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

/// One tabular result plus scalar summary entries. The column labels carry
/// the units (E_eV, t_s, ...) unless a table is in tidy layout, where the
/// unit is its own column.
struct Report {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::uint64_t seed = 0;
};

/// Comma-separated, header row first, LF endings; summary entries appended
/// as '# key = value' trailer lines.
inline std::string to_csv(const Report& r) {
    std::string out;
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(r.columns[i]);
    }
    out += '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(cell_to_string(row[i]));
        }
        out += '\n';
    }
    for (const auto& [k, v] : r.summary) {
        out += "# " + k + " = " + v + "\n";
    }
    return out;
}

/// {config_echo, results, provenance:{version, seed}}.
inline std::string to_json(const Report& r) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json echo = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.config_echo) echo[k] = v;
    j["config_echo"] = echo;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < r.columns.size(); ++i) {
            const Cell& c = row[i];
            if (std::holds_alternative<double>(c)) obj[r.columns[i]] = std::get<double>(c);
            else if (std::holds_alternative<std::int64_t>(c)) obj[r.columns[i]] = std::get<std::int64_t>(c);
            else obj[r.columns[i]] = std::get<std::string>(c);
        }
        rows.push_back(obj);
    }
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.summary) summary[k] = v;
    j["results"] = {{"command", r.command}, {"rows", rows}, {"summary", summary}};
    j["provenance"] = {{"version", kVersion}, {"seed", r.seed}};
    return j.dump(2) + "\n";
}

}  // namespace nudamp
