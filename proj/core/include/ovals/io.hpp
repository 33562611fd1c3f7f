#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "ovals/numerics.hpp"

namespace ovals {

// "y,value" rows for a function sampled on a grid.
void write_samples_csv(std::ostream& os, const Grid& grid, const Samples& f);

nlohmann::json grid_to_json(const Grid& grid);
Grid grid_from_json(const nlohmann::json& j);

// Plain numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 if missing
  std::vector<double> get(const std::string& name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);
void write_csv_file(const std::string& path, const CsvTable& table);

}  // namespace ovals
