#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lvef::csv {

// Plain comma-separated table: first row is the header, no quoting, no
// embedded commas or newlines in fields. Cells are kept as raw strings.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based source line per data row, for error messages.
    std::vector<std::size_t> line_numbers;

    // Index of a header column, or nullopt when absent.
    std::optional<std::size_t> column(const std::string& name) const;
    // Same, but throws errc::missing_column.
    std::size_t require_column(const std::string& name) const;
};

Table read_file(const std::string& path);
Table parse(const std::string& text);

void write_file(const std::string& path, const Table& table);

// Numeric cell parsers; throw errc::malformed_row with the line number.
double parse_double(const std::string& cell, std::size_t line, const std::string& column);
long parse_long(const std::string& cell, std::size_t line, const std::string& column);

// Shortest decimal representation that round-trips the value exactly.
std::string format_double(double value);

} // namespace lvef::csv
