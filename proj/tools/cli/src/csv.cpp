#include "rdsde_cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rdsde_cli/config.hpp"

namespace rdsde::cli {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const TimeGrid& grid, const std::vector<std::string>& header,
               const std::vector<const SamplePath*>& blocks) {
    out << 't';
    for (const auto& h : header) {
        out << ',' << h;
    }
    out << '\n';
    for (std::size_t k = 0; k < grid.n_points(); ++k) {
        out << format_number(grid.time(k));
        for (const SamplePath* b : blocks) {
            for (std::size_t i = 0; i < b->dim(); ++i) {
                out << ',' << format_number((*b)(k, i));
            }
        }
        out << '\n';
    }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read CSV file '" + path + "'");
    }
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (table.header.empty()) {
            table.header = cells;
            table.columns.resize(cells.size());
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(table.header.size()) + " fields");
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v = 0.0;
            const char* first = cells[c].data();
            const char* last = first + cells[c].size();
            if (first != last && *first == '+') {
                ++first;
            }
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed number '" + cells[c] + "'");
            }
            table.columns[c].push_back(v);
        }
    }
    if (table.header.size() < 2 || table.columns[0].size() < 2) {
        throw ConfigError(path + ": needs a t column, at least one data column and two rows");
    }
    if (table.header[0] != "t") {
        throw ConfigError(path + ": first column must be 't'");
    }
    return table;
}

SamplePath table_to_path(const CsvTable& table) {
    const auto& t = table.columns[0];
    const std::size_t n = t.size() - 1;
    const TimeGrid grid(t.front(), t.back(), n);
    for (std::size_t k = 0; k <= n; ++k) {
        if (std::abs(t[k] - grid.time(k)) > 1e-9 * std::max(1.0, std::abs(grid.step()) * static_cast<double>(n))) {
            throw ConfigError("CSV time column is not a uniform grid (row " + std::to_string(k + 2) + ")");
        }
    }
    const std::size_t dim = table.columns.size() - 1;
    SamplePath path(grid, dim);
    for (std::size_t k = 0; k <= n; ++k) {
        for (std::size_t i = 0; i < dim; ++i) {
            path(k, i) = table.columns[i + 1][k];
        }
    }
    return path;
}

}  // namespace rdsde::cli
