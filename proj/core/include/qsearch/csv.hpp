#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qsearch/expansion.hpp"

namespace qsearch {

inline constexpr int kCsvVersion = 1;

// `# qsearch-csv v1 schema=<schema>` followed by the column line.
void write_csv_header(std::ostream& out, std::string_view schema,
                      const std::vector<std::string>& columns);

// Shortest representation that round-trips (fixed "C" locale).
std::string format_double(double value);

void write_check_rows(std::ostream& out, const std::vector<CheckRow>& rows);

}  // namespace qsearch
