#include "ovals/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace ovals {

void write_samples_csv(std::ostream& os, const Grid& grid, const Samples& f) {
  if (static_cast<int>(f.size()) != grid.count) throw UsageError("samples do not match the grid");
  os << "y,value\n" << std::setprecision(17);
  for (int i = 0; i < grid.count; ++i) os << grid.node(i) << ',' << f[i] << '\n';
}

nlohmann::json grid_to_json(const Grid& grid) {
  return {{"half_length", grid.half_length}, {"count", grid.count}};
}

Grid grid_from_json(const nlohmann::json& j) {
  return Grid(j.at("half_length").get<double>(), j.at("count").get<int>());
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> CsvTable::get(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw UsageError("csv column missing: " + name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.at(c));
  return out;
}

void write_csv(std::ostream& os, const CsvTable& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n' << std::setprecision(12);
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw UsageError("empty csv");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return read_csv(in);
}

void write_csv_file(const std::string& path, const CsvTable& t) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  write_csv(out, t);
}

}  // namespace ovals
