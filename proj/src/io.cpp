#include "mlnhardy/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mlnhardy/errors.hpp"

namespace mlnhardy::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);  // binary: byte-identical across platforms
  if (!impl_->out) throw ValidationError("cannot open CSV output: " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    impl_->out << header[i] << (i + 1 < header.size() ? "," : "");
  impl_->out << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    impl_->out << format_double(values[i]) << (i + 1 < values.size() ? "," : "");
  impl_->out << '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    impl_->out << cells[i] << (i + 1 < cells.size() ? "," : "");
  impl_->out << '\n';
}

nlohmann::json mesh_header(const Mesh& mesh) {
  nlohmann::json j;
  j["n"] = mesh.dim();
  j["N"] = mesh.per_axis();
  j["L"] = mesh.halfwidth();
  j["h"] = mesh.spacing();
  j["interior_count"] = mesh.interior_count();
  const Domain& d = mesh.domain();
  nlohmann::json dj;
  switch (d.kind) {
    case Domain::Kind::ball: dj["kind"] = "ball"; dj["radius"] = d.halfwidths[0]; break;
    case Domain::Kind::box: dj["kind"] = "box"; dj["halfwidths"] = d.halfwidths; break;
    case Domain::Kind::ellipsoid: dj["kind"] = "ellipsoid"; dj["semiaxes"] = d.halfwidths; break;
  }
  dj["center"] = d.center;
  j["domain"] = dj;
  return j;
}

nlohmann::json report_of(const SolveReport& rep) {
  nlohmann::json j;
  j["residual_norm"] = rep.residual_norm;
  j["iterations"] = rep.iterations;
  j["gamma"] = rep.gamma;
  j["min_value"] = rep.min_value;
  j["max_value"] = rep.max_value;
  j["wall_time"] = rep.wall_time;
  j["norms"] = rep.norms;
  j["parameters"] = rep.parameters;
  return j;
}

void write_field_csv(const std::string& path, const FieldVector& u) {
  const Mesh& mesh = u.mesh();
  std::vector<std::string> header{"node"};
  const char* names[4] = {"x", "y", "z", "w"};
  for (int d = 0; d < mesh.dim(); ++d) header.push_back(names[d]);
  header.push_back("value");
  CsvWriter csv(path, header);
  std::vector<std::string> cells;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cells.clear();
    cells.push_back(std::to_string(i));
    for (int d = 0; d < mesh.dim(); ++d) cells.push_back(format_double(mesh.coord(i, d)));
    cells.push_back(format_double(u[i]));
    csv.raw_row(cells);
  }
}

void write_field(const std::string& path_prefix, const FieldVector& u) {
  write_json(path_prefix + ".json", mesh_header(u.mesh()));
  write_field_csv(path_prefix + ".csv", u);
}

FieldVector read_field_csv(const std::string& path, const Mesh& mesh) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open field table: " + path);
  FieldVector u(mesh);
  std::string line;
  std::getline(in, line);  // header
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2) throw ValidationError("malformed field table row: " + line);
    const std::size_t node = static_cast<std::size_t>(std::stoul(cells.front()));
    if (node >= u.size()) throw ValidationError("field table node index out of range");
    u[node] = std::stod(cells.back());
    ++count;
  }
  if (count != u.size())
    throw ValidationError("field table covers " + std::to_string(count) + " of " +
                          std::to_string(u.size()) + " nodes");
  return u;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open JSON output: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace mlnhardy::io
