#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace adastable {

/// Shortest text that round-trips: 17 significant digits, '.' decimal point.
std::string format_double(double v);

/// Parses a full-field decimal number; false on trailing garbage or empty input.
bool parse_double(std::string_view text, double& out);

/// Header plus data rows; `lines` keeps the 1-based source line of each row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;

    /// Index of a named column; throws InputError if absent.
    std::size_t column(std::string_view name) const;
    /// Numeric cell; throws InputError naming the line when unparsable.
    double number(std::size_t row, std::size_t col) const;
};

/// Comma-separated with a header row. Blank lines are skipped, no quoting.
CsvTable read_csv_table(std::istream& in);

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace adastable
