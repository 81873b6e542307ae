#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace saddleflow {

/// Column-oriented CSV table. Numbers render with 17 significant digits so
/// 64-bit values round-trip exactly; rows end with LF.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  std::string to_string() const;
};

std::string format_double(double v);

void write_csv(const CsvTable& table, const std::string& path);
CsvTable read_csv(const std::string& path);

/// Column lookup by header name; throws when absent.
const std::vector<double>& csv_column(const CsvTable& table, const std::string& name);

} // namespace saddleflow
