#include "sparsevar/varproc.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sparsevar/linalg.hpp"
#include "sparsevar/rng.hpp"
#include "sparsevar/tolerances.hpp"

namespace sparsevar {

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
  if (first + count > t_len) throw BadParams("TimeSeries::slice: out of range");
  TimeSeries out(count, dim);
  std::copy(values.begin() + first * dim, values.begin() + (first + count) * dim,
            out.values.begin());
  return out;
}

void TimeSeries::check_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) throw BadParams("TimeSeries: non-finite value");
}

VarModel::VarModel(std::vector<DenseMatrix> lags, DenseMatrix noise)
    : p(lags.size()), transitions(std::move(lags)), noise_cov(std::move(noise)) {
  if (p == 0) throw BadParams("VarModel: at least one lag required");
  const std::size_t d = noise_cov.rows();
  if (!noise_cov.square()) throw DimensionMismatch("VarModel: noise_cov square");
  for (const auto& a : transitions)
    if (a.rows() != d || a.cols() != d)
      throw DimensionMismatch("VarModel: transition shape");
  const double scale = std::max(1.0, max_abs(noise_cov));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (std::abs(noise_cov(i, j) - noise_cov(j, i)) > tol::kSymmetryRel * scale)
        throw BadParams("VarModel: noise_cov not symmetric");
}

CompanionForm augment(const VarModel& model) {
  const std::size_t d = model.dim();
  const std::size_t p = model.p;
  if (p == 1) return {model.transitions[0], model.noise_cov};

  DenseMatrix a_tilde(d * p, d * p);
  for (std::size_t k = 0; k < p; ++k) {
    const DenseMatrix& lag = model.transitions[k];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        a_tilde(k * d + i, j) = lag(i, j);
    if (k + 1 < p)
      for (std::size_t i = 0; i < d; ++i)
        a_tilde(k * d + i, (k + 1) * d + i) = 1.0;
  }
  DenseMatrix psi_tilde(d * p, d * p);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      psi_tilde(i, j) = model.noise_cov(i, j);
  return {std::move(a_tilde), std::move(psi_tilde)};
}

bool is_stationary(const VarModel& model) {
  const CompanionForm companion = augment(model);
  try {
    return spectral_radius_bound(companion.a_tilde, 32) <
           1.0 - tol::kStationarityMargin;
  } catch (const OverflowError&) {
    return false;  // powers diverged: wildly unstable
  }
}

DenseMatrix stationary_covariance(const VarModel& model) {
  if (!is_stationary(model))
    throw NotStationary("stationary_covariance: model is not stationary");
  const CompanionForm companion = augment(model);
  const DenseMatrix a_t = transpose(companion.a_tilde);

  DenseMatrix sigma = companion.psi_tilde;
  bool converged = false;
  for (int it = 0; it < tol::kLyapunovMaxIter; ++it) {
    DenseMatrix next =
        add(matmul(a_t, matmul(sigma, companion.a_tilde)), companion.psi_tilde);
    const double step = max_abs_diff(next, sigma);
    sigma = std::move(next);
    if (step < tol::kLyapunovStep) { converged = true; break; }
  }
  if (!converged)
    throw NoConvergence("stationary_covariance: iteration cap reached");

  sigma = symmetrize_average(sigma);
  const DenseMatrix residual =
      sub(add(matmul(a_t, matmul(sigma, companion.a_tilde)), companion.psi_tilde),
          sigma);
  if (max_abs(residual) >= tol::kLyapunovResidual)
    throw NoConvergence("stationary_covariance: residual above tolerance");
  return sigma;
}

DenseMatrix lag1_autocov(const DenseMatrix& sigma, const DenseMatrix& a_tilde) {
  return matmul(sigma, a_tilde);
}

namespace {

// One recursion step: writes X_t into series row `t` (0-based) using noise
// draw indices noise_base .. noise_base+d-1.
void step_observation(const VarModel& model, const DenseMatrix& noise_chol,
                      const CounterRng& rng, std::uint64_t noise_base,
                      std::size_t t, TimeSeries& series,
                      std::vector<double>& eta) {
  const std::size_t d = model.dim();
  for (std::size_t j = 0; j < d; ++j) eta[j] = rng.normal(noise_base + j);
  for (std::size_t j = 0; j < d; ++j) {
    // innovation = (noise_chol * eta)_j, lower-triangular factor
    double v = 0.0;
    for (std::size_t k = 0; k <= j; ++k) v += noise_chol(j, k) * eta[k];
    series(t, j) = v;
  }
  for (std::size_t k = 0; k < model.p; ++k) {
    const DenseMatrix& lag = model.transitions[k];
    const double* past = series.row(t - k - 1);
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < d; ++i) v += lag(i, j) * past[i];
      series(t, j) += v;
    }
  }
}

}  // namespace

TimeSeries simulate(const VarModel& model, std::size_t t_len,
                    std::uint64_t seed) {
  const std::size_t d = model.dim();
  const std::size_t p = model.p;
  if (t_len < p) throw SeriesTooShort("simulate: t_len below lag order");
  if (!is_stationary(model))
    throw NotStationary("simulate: model is not stationary");

  const DenseMatrix noise_chol = cholesky(model.noise_cov);
  const CounterRng rng(seed);
  std::vector<double> eta(d * p, 0.0);

  bool exact_init = true;
  DenseMatrix init_chol(1, 1);
  try {
    init_chol = cholesky(stationary_covariance(model));
  } catch (const NotPositiveDefinite&) {
    exact_init = false;  // numerically semidefinite stationary covariance
  }

  if (exact_init) {
    TimeSeries series(t_len, d);
    // Stacked initial state holds X_p .. X_1 top-down; counters 0..dp-1.
    const std::size_t m = d * p;
    for (std::size_t j = 0; j < m; ++j) eta[j] = rng.normal(j);
    for (std::size_t block = 0; block < p; ++block) {
      const std::size_t obs = p - 1 - block;  // series row for this block
      for (std::size_t j = 0; j < d; ++j) {
        const std::size_t r = block * d + j;
        double v = 0.0;
        for (std::size_t k = 0; k <= r; ++k) v += init_chol(r, k) * eta[k];
        series(obs, j) = v;
      }
    }
    std::vector<double> step_eta(d, 0.0);
    for (std::size_t t = p; t < t_len; ++t)
      step_observation(model, noise_chol, rng, m + (t - p) * d, t, series,
                       step_eta);
    return series;
  }

  // Burn-in fallback: 500 steps from the zero state, then keep t_len rows.
  const std::size_t burn = 500;
  TimeSeries full(burn + t_len, d);
  std::vector<double> step_eta(d, 0.0);
  for (std::size_t t = p; t < burn + t_len; ++t)
    step_observation(model, noise_chol, rng, (t - p) * d, t, full, step_eta);
  return full.slice(burn, t_len);
}

}  // namespace sparsevar
