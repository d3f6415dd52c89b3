#pragma once

#include <vector>

#include "sparsevar/covest.hpp"
#include "sparsevar/dense_matrix.hpp"
#include "sparsevar/lp.hpp"
#include "sparsevar/varproc.hpp"

namespace sparsevar {

// Fitted coefficient block (dp x d) of the column-LP estimator together with
// the per-lag extraction and per-column solver outcomes.
struct DirectEstimate {
  DenseMatrix omega_hat;           // dp x d, column j = coefficient vector
  std::vector<DenseMatrix> lags;   // p matrices, each d x d (row blocks)
  double lambda0;
  std::vector<LpStatus> per_column_status;  // length d
  std::vector<std::size_t> per_column_pivots;

  std::size_t infeasible_columns() const;
};

// Population quantities feeding the theoretical tuning formulas.
struct TuningInputs {
  double sigma_norm2;     // spectral norm of the (stacked) covariance
  double sigma_diag_max;  // largest diagonal entry
  double sigma_diag_min;  // smallest diagonal entry
  double a_norm2;         // spectral norm of the (companion) transition
  double m_d;             // induced-L1 bound on the transition block
  double c_const = 32.0;  // generic constant for the multi-lag formula
};

// Rows d(k-1)+1 .. dk of a dp x d coefficient block form lag matrix k.
std::vector<DenseMatrix> extract_lags(const DenseMatrix& coef, std::size_t d,
                                      std::size_t p);
// Inverse of extract_lags: stacks p lag matrices into a dp x d block.
DenseMatrix stack_lags(const std::vector<DenseMatrix>& lags);

// Column-LP estimator: builds the stacked sample covariances, solves one
// linear program per response column with threshold lambda0, and assembles
// the coefficient block. Infeasible columns are returned as zero columns with
// their status flagged; only an entirely infeasible fit raises.
DirectEstimate estimate_direct(const TimeSeries& ts, std::size_t p,
                               double lambda0, unsigned workers = 1);

// Same solve on precomputed covariances (used by cross-validation loops).
DirectEstimate estimate_direct_cov(const CovPair& cov, std::size_t d,
                                   double lambda0, unsigned workers = 1);

// Threshold from the estimation-error analysis. Order 1 uses
//   32 * s2 * dmax / (dmin * (1 - a2)) * (2 m_d + 3) * sqrt(log d / T);
// higher orders use the companion-form variant with constant c_const and
// sqrt((log d + log p) / (T - p)).
double theoretical_lambda(const TuningInputs& inputs, std::size_t d,
                          std::size_t p, std::size_t t_len);

// Zeroes entries with magnitude below gamma.
DenseMatrix truncate(const DenseMatrix& estimate, double gamma);

// For each off-diagonal pair keeps the entry of smaller magnitude (on ties
// the one above the diagonal); output is symmetric.
DenseMatrix symmetrize(const DenseMatrix& estimate);

// Ridge-penalized least squares with the same lag extraction convention.
std::vector<DenseMatrix> estimate_ridge(const TimeSeries& ts, std::size_t p,
                                        double gamma);

struct LassoEstimate {
  std::vector<DenseMatrix> lags;
  bool converged;
  std::size_t sweeps;  // max over response rows
};

// L1-penalized least squares by cyclic coordinate descent with exact
// soft-threshold updates; the d response problems are independent.
LassoEstimate estimate_lasso(const TimeSeries& ts, std::size_t p,
                             double lambda, unsigned workers = 1);

}  // namespace sparsevar
