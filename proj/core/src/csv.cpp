#include "turbuq/csv.hpp"

#include "turbuq/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace turbuq::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    for (auto& c : cells) {
        while (!c.empty() && (c.back() == '\r' || c.back() == ' ' || c.back() == '\t')) c.pop_back();
        std::size_t lead = 0;
        while (lead < c.size() && (c[lead] == ' ' || c[lead] == '\t')) ++lead;
        if (lead > 0) c.erase(0, lead);
    }
    return cells;
}

} // namespace

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

Table read_stream(std::istream& in, const std::string& origin) {
    Table table;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line == "\r") continue;
        auto cells = split_line(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            std::ostringstream os;
            os << origin << ": row " << line_number << " has " << cells.size()
               << " cells, expected " << table.header.size();
            throw data_error(os.str());
        }
        table.rows.push_back(std::move(cells));
        table.line_numbers.push_back(line_number);
    }
    if (table.header.empty()) {
        throw data_error(origin + ": empty file (no header row)");
    }
    return table;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw data_error("cannot open '" + path.string() + "'");
    }
    return read_stream(in, path.filename().string());
}

void require_columns(const Table& table, const std::vector<std::string>& required,
                     const std::string& origin) {
    std::vector<std::string> missing;
    for (const auto& name : required) {
        if (table.column(name) < 0) missing.push_back(name);
    }
    if (!missing.empty()) {
        std::ostringstream os;
        os << origin << ": missing required column";
        if (missing.size() > 1) os << "s";
        os << ": ";
        for (std::size_t i = 0; i < missing.size(); ++i) {
            if (i) os << ", ";
            os << missing[i];
        }
        throw data_error(os.str());
    }
}

double parse_double(const Table& table, std::size_t row, int col, const std::string& origin) {
    const std::string& cell = table.rows[row][static_cast<std::size_t>(col)];
    double value = 0.0;
    const auto* begin = cell.data();
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        std::ostringstream os;
        os << origin << ": row " << table.line_numbers[row] << ", column '"
           << table.header[static_cast<std::size_t>(col)] << "': cannot parse '" << cell
           << "' as a number";
        throw data_error(os.str());
    }
    return value;
}

std::int64_t parse_int(const Table& table, std::size_t row, int col, const std::string& origin) {
    const std::string& cell = table.rows[row][static_cast<std::size_t>(col)];
    std::int64_t value = 0;
    const auto* begin = cell.data();
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        std::ostringstream os;
        os << origin << ": row " << table.line_numbers[row] << ", column '"
           << table.header[static_cast<std::size_t>(col)] << "': cannot parse '" << cell
           << "' as an integer";
        throw data_error(os.str());
    }
    return value;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& write) {
    namespace fs = std::filesystem;
    const fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    const fs::path tmp = dir / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw data_error("cannot create '" + tmp.string() + "'");
            }
            write(out);
            out.flush();
            if (!out) {
                throw data_error("write to '" + tmp.string() + "' failed");
            }
        }
        fs::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

} // namespace turbuq::csv
