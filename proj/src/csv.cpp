#include "saddleflow/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace saddleflow {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out << ',';
    out << header[c];
  }
  out << '\n';
  const std::size_t n = rows();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ',';
      out << format_double(columns[c][r]);
    }
    out << '\n';
  }
  return out.str();
}

void write_csv(const CsvTable& table, const std::string& path) {
  if (table.header.size() != table.columns.size())
    throw std::invalid_argument("write_csv: header/column count mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw std::runtime_error("write_csv: cannot open " + path);
  out << table.to_string();
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("read_csv: cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file " + path);
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  }
  table.columns.assign(table.header.size(), {});
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= table.columns.size())
        throw std::runtime_error("read_csv: too many cells at line " + std::to_string(line_no));
      table.columns[c++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (c != table.columns.size())
      throw std::runtime_error("read_csv: short row at line " + std::to_string(line_no));
  }
  return table;
}

const std::vector<double>& csv_column(const CsvTable& table, const std::string& name) {
  for (std::size_t c = 0; c < table.header.size(); ++c)
    if (table.header[c] == name) return table.columns[c];
  throw std::runtime_error("csv: missing column '" + name + "'");
}

} // namespace saddleflow
