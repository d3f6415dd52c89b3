#include "sparsevar/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "sparsevar/linalg.hpp"
#include "sparsevar/parallel.hpp"
#include "sparsevar/tolerances.hpp"

namespace sparsevar {

std::size_t DirectEstimate::infeasible_columns() const {
  std::size_t n = 0;
  for (LpStatus s : per_column_status)
    if (s != LpStatus::Optimal) ++n;
  return n;
}

std::vector<DenseMatrix> extract_lags(const DenseMatrix& coef, std::size_t d,
                                      std::size_t p) {
  if (coef.rows() != d * p || coef.cols() != d)
    throw DimensionMismatch("extract_lags: coefficient block shape");
  std::vector<DenseMatrix> lags;
  lags.reserve(p);
  for (std::size_t k = 0; k < p; ++k) {
    DenseMatrix lag(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) lag(i, j) = coef(k * d + i, j);
    lags.push_back(std::move(lag));
  }
  return lags;
}

DenseMatrix stack_lags(const std::vector<DenseMatrix>& lags) {
  if (lags.empty()) throw BadParams("stack_lags: no matrices");
  const std::size_t d = lags.front().rows();
  for (const auto& lag : lags)
    if (lag.rows() != d || lag.cols() != d)
      throw DimensionMismatch("stack_lags: lag shape");
  DenseMatrix out(d * lags.size(), d);
  for (std::size_t k = 0; k < lags.size(); ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out(k * d + i, j) = lags[k](i, j);
  return out;
}

DirectEstimate estimate_direct_cov(const CovPair& cov, std::size_t d,
                                   double lambda0, unsigned workers) {
  if (lambda0 < 0.0) throw BadParams("estimate_direct: negative lambda0");
  const std::size_t m = cov.s.rows();
  if (m % d != 0 || cov.s1.rows() != m || cov.s1.cols() != m)
    throw DimensionMismatch("estimate_direct: covariance shape");
  const std::size_t p = m / d;

  DirectEstimate est{DenseMatrix(m, d), {}, lambda0,
                     std::vector<LpStatus>(d, LpStatus::Infeasible),
                     std::vector<std::size_t>(d, 0)};
  std::vector<std::vector<double>> betas(d);

  parallel_for(d, workers, [&](std::size_t j) {
    std::vector<double> col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = cov.s1(i, j);
    const ColumnLp lp = build_column_lp(cov.s, col, lambda0);
    const LpSolution sol = solve_simplex(lp);
    est.per_column_status[j] = sol.status;
    est.per_column_pivots[j] = sol.pivots;
    if (sol.status == LpStatus::Optimal) betas[j] = recover_beta(sol, m);
  });

  std::size_t n_ok = 0;
  for (std::size_t j = 0; j < d; ++j) {
    if (est.per_column_status[j] != LpStatus::Optimal) continue;
    ++n_ok;
    for (std::size_t i = 0; i < m; ++i) est.omega_hat(i, j) = betas[j][i];
  }
  if (n_ok == 0)
    throw AllColumnsInfeasible("estimate_direct: every column infeasible");

  // Feasibility of each solved column against its own constraint.
  for (std::size_t j = 0; j < d; ++j) {
    if (est.per_column_status[j] != LpStatus::Optimal) continue;
    for (std::size_t i = 0; i < m; ++i) {
      double v = -cov.s1(i, j);
      const double* srow = cov.s.row_ptr(i);
      for (std::size_t r = 0; r < m; ++r) v += srow[r] * est.omega_hat(r, j);
      if (std::abs(v) > lambda0 + tol::kFeasibilitySlack)
        throw Error("estimate_direct: solved column violates its constraint");
    }
  }

  est.lags = extract_lags(est.omega_hat, d, p);
  return est;
}

DirectEstimate estimate_direct(const TimeSeries& ts, std::size_t p,
                               double lambda0, unsigned workers) {
  const CovPair cov = sample_covariances(ts, p);
  return estimate_direct_cov(cov, ts.dim, lambda0, workers);
}

double theoretical_lambda(const TuningInputs& inputs, std::size_t d,
                          std::size_t p, std::size_t t_len) {
  if (inputs.sigma_diag_min <= 0.0)
    throw BadParams("theoretical_lambda: nonpositive diagonal minimum");
  if (inputs.a_norm2 >= 1.0)
    throw UnstableModel("theoretical_lambda: transition spectral norm >= 1");
  if (t_len <= p) throw SeriesTooShort("theoretical_lambda: t_len <= p");

  const double base = inputs.sigma_norm2 * inputs.sigma_diag_max /
                      (inputs.sigma_diag_min * (1.0 - inputs.a_norm2));
  if (p == 1) {
    return 32.0 * base * (2.0 * inputs.m_d + 3.0) *
           std::sqrt(std::log(static_cast<double>(d)) /
                     static_cast<double>(t_len));
  }
  return inputs.c_const * base * std::max(inputs.m_d, 1.0) *
         std::sqrt((std::log(static_cast<double>(d)) +
                    std::log(static_cast<double>(p))) /
                   static_cast<double>(t_len - p));
}

DenseMatrix truncate(const DenseMatrix& estimate, double gamma) {
  if (gamma < 0.0) throw BadParams("truncate: negative threshold");
  DenseMatrix out = estimate;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      if (std::abs(out(i, j)) < gamma) out(i, j) = 0.0;
  return out;
}

DenseMatrix symmetrize(const DenseMatrix& estimate) {
  if (!estimate.square()) throw DimensionMismatch("symmetrize: square input");
  DenseMatrix out = estimate;
  for (std::size_t j = 0; j < out.rows(); ++j)
    for (std::size_t k = j + 1; k < out.cols(); ++k) {
      const double upper = out(j, k);
      const double lower = out(k, j);
      const double kept = (std::abs(lower) < std::abs(upper)) ? lower : upper;
      out(j, k) = kept;
      out(k, j) = kept;
    }
  return out;
}

namespace {

// Design block (dp x n) whose column t stacks the p observations preceding
// target t (newest first), and the matching d x n target block.
struct Design {
  DenseMatrix x;  // dp x (T-p)
  DenseMatrix y;  // d x (T-p)
};

Design build_design(const TimeSeries& ts, std::size_t p) {
  if (ts.t_len < p + 1)
    throw SeriesTooShort("least squares: need at least p+1 observations");
  const std::size_t d = ts.dim;
  const std::size_t n = ts.t_len - p;
  Design design{DenseMatrix(d * p, n), DenseMatrix(d, n)};
  for (std::size_t t = 0; t < n; ++t) {
    // target is observation index p+t (0-based)
    for (std::size_t j = 0; j < d; ++j) design.y(j, t) = ts(p + t, j);
    for (std::size_t k = 0; k < p; ++k) {
      const double* row = ts.row(p + t - 1 - k);
      for (std::size_t j = 0; j < d; ++j) design.x(k * d + j, t) = row[j];
    }
  }
  return design;
}

}  // namespace

std::vector<DenseMatrix> estimate_ridge(const TimeSeries& ts, std::size_t p,
                                        double gamma) {
  if (gamma <= 0.0) throw BadParams("estimate_ridge: gamma must be positive");
  const Design design = build_design(ts, p);
  const std::size_t m = design.x.rows();

  DenseMatrix gram = matmul(design.x, transpose(design.x));
  for (std::size_t i = 0; i < m; ++i) gram(i, i) += gamma;
  const DenseMatrix rhs = matmul(design.x, transpose(design.y));
  const DenseMatrix coef = solve_spd(gram, rhs);
  return extract_lags(coef, ts.dim, p);
}

LassoEstimate estimate_lasso(const TimeSeries& ts, std::size_t p, double lambda,
                             unsigned workers) {
  if (lambda < 0.0) throw BadParams("estimate_lasso: negative lambda");
  const Design design = build_design(ts, p);
  const std::size_t m = design.x.rows();
  const std::size_t d = ts.dim;

  const DenseMatrix gram = matmul(design.x, transpose(design.x));
  const DenseMatrix corr = matmul(design.x, transpose(design.y));  // m x d

  DenseMatrix coef(m, d);
  std::vector<std::size_t> sweeps(d, 0);
  std::vector<bool> converged(d, false);

  parallel_for(d, workers, [&](std::size_t r) {
    // minimize ||y_r - x^T beta||^2 + lambda * ||beta||_1
    std::vector<double> beta(m, 0.0);
    std::vector<double> gram_beta(m, 0.0);  // gram * beta, kept incrementally
    const double half_lambda = 0.5 * lambda;

    std::size_t sweep = 0;
    for (; sweep < static_cast<std::size_t>(tol::kLassoMaxSweeps); ++sweep) {
      double max_change = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double gjj = gram(j, j);
        if (gjj <= 0.0) continue;
        const double partial =
            corr(j, r) - gram_beta[j] + gjj * beta[j];
        double next = 0.0;
        if (partial > half_lambda) next = (partial - half_lambda) / gjj;
        else if (partial < -half_lambda) next = (partial + half_lambda) / gjj;
        const double delta = next - beta[j];
        if (delta != 0.0) {
          beta[j] = next;
          const double* grow = gram.row_ptr(j);
          for (std::size_t i = 0; i < m; ++i) gram_beta[i] += delta * grow[i];
          max_change = std::max(max_change, std::abs(delta));
        }
      }
      if (max_change < tol::kLassoTol) { converged[r] = true; break; }
    }
    sweeps[r] = sweep;
    for (std::size_t j = 0; j < m; ++j) coef(j, r) = beta[j];
  });

  LassoEstimate est;
  est.lags = extract_lags(coef, d, p);
  est.converged = std::all_of(converged.begin(), converged.end(),
                              [](bool b) { return b; });
  est.sweeps = *std::max_element(sweeps.begin(), sweeps.end());
  return est;
}

}  // namespace sparsevar
