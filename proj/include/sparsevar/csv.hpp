#pragma once

#include <string>

#include "sparsevar/dense_matrix.hpp"
#include "sparsevar/varproc.hpp"

namespace sparsevar {

// Matrix CSV: one row per line, comma-separated, no header; 17 significant
// digits so doubles round-trip exactly.
void write_matrix_csv(const DenseMatrix& m, const std::string& path);
DenseMatrix read_matrix_csv(const std::string& path);

// Series CSV: T lines of d values. A single leading header line is skipped
// on read when its first token is not numeric.
void write_series_csv(const TimeSeries& ts, const std::string& path);
TimeSeries read_series_csv(const std::string& path);

std::string format_double(double v);  // %.17g

}  // namespace sparsevar
