#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace mobius_lab {

using Cell = std::variant<double, std::int64_t, std::string, bool>;

// Column-named rows, emitted as CSV (header row, ',' separator, '.' decimal)
// or as a JSON array of row objects. Reals use 17 significant digits in both.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    std::string to_csv() const;
    std::string to_json() const;
};

std::string format_real(double v);

}  // namespace mobius_lab
