#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "rdsde/path.hpp"

namespace rdsde::cli {

/// Shortest text with 17 significant digits; round-trips every double.
std::string format_number(double v);

/// Header row, then one row per grid point: t followed by the columns of each path.
void write_csv(std::ostream& out, const TimeGrid& grid, const std::vector<std::string>& header,
               const std::vector<const SamplePath*>& blocks);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

CsvTable read_csv(const std::string& path);

/// Uniform grid and remaining columns of a table whose first column is t.
SamplePath table_to_path(const CsvTable& table);

}  // namespace rdsde::cli
