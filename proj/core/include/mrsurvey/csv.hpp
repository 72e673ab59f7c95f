#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrsurvey {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column position by name; -1 when absent.
  int column(const std::string& name) const;
};

// Plain comma-separated values; cells are trimmed, empty cells allowed,
// ragged rows rejected with their 1-based line number (header is line 1).
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

// Shortest-or-17-significant-digit form that round-trips bit exactly.
std::string format_double(double x);

// Full-cell numeric parse; `row` is the 1-based line number for messages.
double parse_double(const std::string& cell, int row, const std::string& col);

}  // namespace mrsurvey
