#pragma once

#include <cstdint>
#include <vector>

#include "sparsevar/dense_matrix.hpp"

namespace sparsevar {

// T x d block of observations; row t-1 holds the transpose of observation
// X_t (time indices are 1-based throughout the library).
struct TimeSeries {
  std::size_t t_len;
  std::size_t dim;
  std::vector<double> values;  // row-major, t_len * dim

  TimeSeries(std::size_t t, std::size_t d)
      : t_len(t), dim(d), values(t * d, 0.0) {
    if (t == 0 || d == 0) throw BadParams("TimeSeries: zero dimension");
  }

  double operator()(std::size_t t, std::size_t j) const {
    return values[t * dim + j];
  }
  double& operator()(std::size_t t, std::size_t j) {
    return values[t * dim + j];
  }
  const double* row(std::size_t t) const { return values.data() + t * dim; }

  // Copy of observations [first, first+count) (0-based rows).
  TimeSeries slice(std::size_t first, std::size_t count) const;

  void check_finite() const;
};

// Stationary VAR process of order p: each observation is
// sum_k transitions[k-1]^T * (observation k steps back) plus N(0, noise_cov)
// noise.
struct VarModel {
  std::size_t p;
  std::vector<DenseMatrix> transitions;  // p matrices, each d x d
  DenseMatrix noise_cov;                 // d x d

  VarModel(std::vector<DenseMatrix> lags, DenseMatrix noise);

  std::size_t dim() const { return noise_cov.rows(); }
};

// Order-1 rewrite of a VAR(p) model on the dp-dimensional stacked state.
struct CompanionForm {
  DenseMatrix a_tilde;    // dp x dp
  DenseMatrix psi_tilde;  // dp x dp, top-left d x d block = noise_cov
};

CompanionForm augment(const VarModel& model);

// True iff the companion matrix passes the repeated-squaring spectral-radius
// bound with margin tol::kStationarityMargin.
bool is_stationary(const VarModel& model);

// Stationary covariance of the stacked state: the fixed point of
// S -> A~^T S A~ + Psi~, iterated from Psi~ until the step change falls
// below tol::kLyapunovStep. The result is symmetrized and its equation
// residual verified against tol::kLyapunovResidual.
DenseMatrix stationary_covariance(const VarModel& model);

// Lag-1 autocovariance of a stationary order-1 process: sigma * a_tilde.
DenseMatrix lag1_autocov(const DenseMatrix& sigma, const DenseMatrix& a_tilde);

// Simulates t_len observations. The initial stacked state is drawn exactly
// from the stationary law when its covariance factors; otherwise falls back
// to 500 burn-in steps from the zero state. Identical (model, t_len, seed)
// produce bit-identical output.
TimeSeries simulate(const VarModel& model, std::size_t t_len,
                    std::uint64_t seed);

}  // namespace sparsevar
