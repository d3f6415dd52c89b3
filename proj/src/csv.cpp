#include "sparsevar/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace sparsevar {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_rows(const double* data, std::size_t rows, std::size_t cols,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (j) out << ',';
      out << format_double(data[i * cols + j]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string token = line.substr(pos, comma - pos);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str()) return false;  // not numeric
    // allow trailing whitespace only
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (*end != '\0') return false;
    out.push_back(v);
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return !out.empty();
}

std::vector<std::vector<double>> read_rows(const std::string& path,
                                           bool allow_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    if (!parse_row(line, row)) {
      if (first && allow_header) { first = false; continue; }
      throw IoError("non-numeric row in " + path);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("no data rows in " + path);
  return rows;
}

}  // namespace

void write_matrix_csv(const DenseMatrix& m, const std::string& path) {
  write_rows(m.data().data(), m.rows(), m.cols(), path);
}

DenseMatrix read_matrix_csv(const std::string& path) {
  const auto rows = read_rows(path, false);
  const std::size_t r = rows.size(), c = rows.front().size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) data.insert(data.end(), row.begin(), row.end());
  return DenseMatrix(r, c, std::move(data));
}

void write_series_csv(const TimeSeries& ts, const std::string& path) {
  write_rows(ts.values.data(), ts.t_len, ts.dim, path);
}

TimeSeries read_series_csv(const std::string& path) {
  const auto rows = read_rows(path, true);
  TimeSeries ts(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      ts(i, j) = rows[i][j];
  ts.check_finite();
  return ts;
}

}  // namespace sparsevar
