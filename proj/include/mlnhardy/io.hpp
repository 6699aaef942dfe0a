#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mlnhardy/grid.hpp"
#include "mlnhardy/solver.hpp"

namespace mlnhardy::io {

// Lossless double formatting for CSV cells: '.' decimal separator, up to 17
// significant digits, locale independent.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

 private:
  struct Impl;
  Impl* impl_;
};

nlohmann::json mesh_header(const Mesh& mesh);
nlohmann::json report_of(const SolveReport& rep);

// solution.csv: node, x..., value
void write_field_csv(const std::string& path, const FieldVector& u);
// JSON header alongside a value table
void write_field(const std::string& path_prefix, const FieldVector& u);
FieldVector read_field_csv(const std::string& path, const Mesh& mesh);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace mlnhardy::io
