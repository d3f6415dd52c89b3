#pragma once

#include "sparsevar/dense_matrix.hpp"
#include "sparsevar/varproc.hpp"

namespace sparsevar {

// Marginal (s) and lag-1 (s1) sample covariance matrices of the stacked
// series, with their sample counts. s is symmetrized on construction.
struct CovPair {
  DenseMatrix s;   // dp x dp
  DenseMatrix s1;  // dp x dp
  std::size_t n_marginal;  // T - p + 1
  std::size_t n_lag;       // T - p
};

// Stacks p consecutive observations (newest first) and averages the outer
// products. No mean subtraction: the process model is zero-mean.
CovPair sample_covariances(const TimeSeries& ts, std::size_t p);

}  // namespace sparsevar
