#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sparsevar/dense_matrix.hpp"
#include "sparsevar/varproc.hpp"

namespace sparsevar {

struct ErrorReport {
  double frobenius;
  double spectral;
  double induced_l1;
  double element_max;
};

// Norms of (estimate - truth); inputs are the stacked dp x d blocks.
ErrorReport error_norms(const DenseMatrix& estimate, const DenseMatrix& truth);

struct SignMetrics {
  bool exact_match;
  double support_precision;  // 1.0 when the estimated support is empty
  double support_recall;     // 1.0 when the true support is empty
};

SignMetrics sign_metrics(const DenseMatrix& truncated, const DenseMatrix& truth);

// One-step forecast sum_k lags[k-1]^T * history[p-k]; history rows are the
// last p observations in chronological order (oldest first).
std::vector<double> predict_next(const std::vector<DenseMatrix>& lags,
                                 const std::vector<std::vector<double>>& history);

enum class EstimatorKind { Direct, Lasso, Ridge };

const char* to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);

struct GridPoint {
  std::size_t p;
  double lambda;
};

struct CvResult {
  std::vector<GridPoint> grid;
  std::vector<double> mean_err;      // NaN marks a skipped grid point
  std::vector<bool> skipped;         // some window failed entirely
  std::vector<std::size_t> infeasible_columns;  // summed over windows
  GridPoint best;
  std::size_t n1;
  std::size_t n2;
};

// Rolling one-step-ahead validation window: for each t in
// {t0-n2, ..., t0-1} the training set is X_{t-n1} .. X_{t-1} (1-based).
struct CvWindow {
  std::size_t train_first;  // 1-based observation index
  std::size_t train_len;    // n1
  std::size_t target;       // t
};

std::vector<CvWindow> cv_windows(std::size_t t0, std::size_t n1, std::size_t n2);

// Fits every grid point on each rolling window, scores the l2 one-step
// error at the window target and returns the grid point with the smallest
// average error (ties: smaller p, then larger lambda). Grid points whose fit
// fails entirely on some window are skipped.
CvResult cross_validate(const TimeSeries& ts, const std::vector<GridPoint>& grid,
                        std::size_t n1, std::size_t n2, std::size_t t0,
                        EstimatorKind method, unsigned workers = 1);

}  // namespace sparsevar
