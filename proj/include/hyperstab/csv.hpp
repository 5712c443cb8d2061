#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperstab/integrate.hpp"
#include "hyperstab/spectrum.hpp"
#include "hyperstab/verify.hpp"

namespace hyperstab {

/// 17 significant digits: enough to round-trip any 64-bit float exactly.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "k,eigenvalue\n";
  for (int k = 0; k < s.size(); ++k)
    os << (k + 1) << ',' << format_double(s.eigenvalues(k)) << '\n';
}

/// N x N table, column k = eigenvector for eigenvalue k (of L itself).
inline void write_eigenvectors_csv(std::ostream& os, const Spectrum& s) {
  const int n = s.size();
  for (int k = 0; k < n; ++k) os << (k ? "," : "") << 'k' << (k + 1);
  os << '\n';
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k)
      os << (k ? "," : "") << format_double(s.eigenvectors(i, k));
    os << '\n';
  }
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 int n_vertices, int dim) {
  os << 't';
  for (int i = 0; i < n_vertices; ++i)
    for (int c = 0; c < dim; ++c) os << ",v" << i << "_c" << c;
  os << '\n';
  for (const SystemState& s : traj.samples) {
    os << format_double(s.t);
    for (int i = 0; i < n_vertices; ++i)
      for (int c = 0; c < dim; ++c) os << ',' << format_double(s.x(i, c));
    os << '\n';
  }
}

inline void write_msf_csv(std::ostream& os,
                          const std::vector<std::pair<double, double>>& curve) {
  os << "alpha,rate\n";
  for (const auto& [alpha, rate] : curve)
    os << format_double(alpha) << ',' << format_double(rate) << '\n';
}

inline void write_sweep_csv(std::ostream& os,
                            const std::vector<SweepRow>& rows) {
  os << "sigma,theory_stable,empirical_sync_fraction,mean_final_sync_error\n";
  for (const SweepRow& r : rows)
    os << format_double(r.sigma) << ',' << (r.theory_stable ? 1 : 0) << ','
       << format_double(r.sync_fraction) << ','
       << format_double(r.mean_final_error) << '\n';
}

/// Parsed CSV with a header row and numeric data rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Strict numeric CSV reader for the tool's own outputs: one header line,
/// then rows of decimal numbers with a constant column count.
inline CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (is.peek() == EOF) break;
      throw ParseError("csv: empty line " + std::to_string(line_no));
    }
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (line_no == 1) {
      table.header = cells;
      continue;
    }
    if (cells.size() != table.header.size())
      throw ParseError("csv: line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(table.header.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& cell : cells) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw ParseError("csv: non-numeric cell '" + cell + "' on line " +
                         std::to_string(line_no));
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ParseError("csv: missing header row");
  return table;
}

inline CsvTable read_csv(const std::string& text) {
  std::istringstream is(text);
  return read_csv(is);
}

}  // namespace hyperstab
