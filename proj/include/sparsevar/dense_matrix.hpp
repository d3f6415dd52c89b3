#pragma once

#include <cstddef>
#include <vector>

#include "sparsevar/errors.hpp"

namespace sparsevar {

// Row-major dense real matrix. Values are expected to be treated as
// immutable once a matrix has been fully built; the mutable accessors exist
// for construction code only, so fully built matrices can be shared freely
// across worker threads.
class DenseMatrix {
 public:
  // Zero matrix of the given shape.
  DenseMatrix(std::size_t rows, std::size_t cols);

  // Takes ownership of `data` (row-major, rows*cols entries). Rejects
  // non-finite entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }

  const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
  double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }

  const std::vector<double>& data() const { return data_; }

  bool operator==(const DenseMatrix& other) const = default;

  // Throws BadParams if any entry is NaN or infinite.
  void check_finite(const char* what) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

DenseMatrix transpose(const DenseMatrix& m);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double factor);

// max_ij |a_ij - b_ij|
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
// max_ij |a_ij|
double max_abs(const DenseMatrix& a);

// (a + a^T) / 2
DenseMatrix symmetrize_average(const DenseMatrix& a);

}  // namespace sparsevar
