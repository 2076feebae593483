#include "ds2cf/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ds2cf/trace.hpp"

namespace ds2cf::csv {

std::string format_double(double value) {
  char buffer[40];
  // round-trip precision, stable across runs
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_matrix(const std::string& path, const Matrix& m,
                  const std::vector<std::string>& header_lines) {
  std::ofstream out(path);
  require(out.good(), Error::Kind::io, "cannot write " + path);
  for (const auto& line : header_lines) out << "# " << line << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  require(out.good(), Error::Kind::io, "write failed: " + path);
}

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Error::Kind::io, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw Error(Error::Kind::parse,
                    "bad number at line " + std::to_string(line_number) + " of " + path);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(Error::Kind::parse,
                  "ragged row at line " + std::to_string(line_number) + " of " + path);
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), Error::Kind::parse, "no data rows in " + path);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace ds2cf::csv

namespace ds2cf {

void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& records,
                     const std::vector<std::string>& header_lines) {
  std::ofstream out(path);
  require(out.good(), Error::Kind::io, "cannot write " + path);
  for (const auto& line : header_lines) out << "# " << line << "\n";
  out << "layer,iter,total_objective,recon,structure,dualgraph,predictor,dW_fro2,dV_fro2,"
         "converged\n";
  for (const auto& r : records) {
    out << r.layer << ',' << r.iter << ',' << csv::format_double(r.total_objective) << ','
        << csv::format_double(r.recon) << ',' << csv::format_double(r.structure) << ','
        << csv::format_double(r.dual_graph) << ',' << csv::format_double(r.predictor) << ','
        << csv::format_double(r.dw_fro2) << ',' << csv::format_double(r.dv_fro2) << ','
        << (r.converged ? 1 : 0) << '\n';
  }
  require(out.good(), Error::Kind::io, "write failed: " + path);
}

}  // namespace ds2cf
