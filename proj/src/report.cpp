#include "mobius_lab/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "mobius_lab/error.hpp"

namespace mobius_lab {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        fail(ErrorKind::Precondition, "row width does not match the column count");
    }
    rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_field(columns[i]);
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        out += format_real(v);
                    } else if constexpr (std::is_same_v<V, std::int64_t>) {
                        out += std::to_string(v);
                    } else if constexpr (std::is_same_v<V, bool>) {
                        out += v ? "true" : "false";
                    } else {
                        out += csv_field(v);
                    }
                },
                row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string Table::to_json() const {
    std::string out = "[";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out += r ? ",\n {" : "\n {";
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out += ", ";
            out += nlohmann::json(columns[i]).dump() + ": ";
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        out += std::isfinite(v) ? format_real(v) : "null";
                    } else if constexpr (std::is_same_v<V, std::int64_t>) {
                        out += std::to_string(v);
                    } else if constexpr (std::is_same_v<V, bool>) {
                        out += v ? "true" : "false";
                    } else {
                        out += nlohmann::json(v).dump();
                    }
                },
                rows[r][i]);
        }
        out += "}";
    }
    out += rows.empty() ? "]\n" : "\n]\n";
    return out;
}

}  // namespace mobius_lab
