#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace turbuq::csv {

/// A parsed CSV file: header names plus string cells, with the source row
/// number of every data row (1-based, header = row 1) for diagnostics.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    /// Column index of `name`; -1 when absent.
    int column(const std::string& name) const;
};

Table read_file(const std::filesystem::path& path);
Table read_stream(std::istream& in, const std::string& origin);

/// Requires every name in `required` to be present; throws a data_error
/// listing all missing columns at once.
void require_columns(const Table& table, const std::vector<std::string>& required,
                     const std::string& origin);

/// Parses one cell as double with a "row R, column 'name'" diagnostic.
double parse_double(const Table& table, std::size_t row, int col, const std::string& origin);
std::int64_t parse_int(const Table& table, std::size_t row, int col, const std::string& origin);

/// Full-precision (%.17g) rendering used for every numeric CSV cell.
std::string format_double(double v);

/// Writes a file atomically: the payload goes to a temporary file in the
/// same directory which is renamed over `path` only after `write` returns.
/// On failure the temporary is removed and `path` is left untouched.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& write);

} // namespace turbuq::csv
