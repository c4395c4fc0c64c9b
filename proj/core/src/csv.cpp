#include "qsearch/csv.hpp"

#include <charconv>
#include <ostream>

namespace qsearch {

void write_csv_header(std::ostream& out, std::string_view schema,
                      const std::vector<std::string>& columns) {
  out << "# qsearch-csv v" << kCsvVersion << " schema=" << schema << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c > 0) out << ',';
    out << columns[c];
  }
  out << '\n';
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

// Quote fields containing separators.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_check_rows(std::ostream& out, const std::vector<CheckRow>& rows) {
  write_csv_header(out, "expansion", {"check", "params", "observed", "reference", "ratio", "pass"});
  for (const auto& r : rows) {
    out << field(r.check) << ',' << field(r.params) << ',' << format_double(r.observed) << ','
        << format_double(r.reference) << ',' << format_double(r.ratio) << ',' << (r.pass ? 1 : 0)
        << '\n';
  }
}

}  // namespace qsearch
