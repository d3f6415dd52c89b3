#include "sparsevar/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsevar/estimators.hpp"
#include "sparsevar/linalg.hpp"
#include "sparsevar/parallel.hpp"

namespace sparsevar {

ErrorReport error_norms(const DenseMatrix& estimate, const DenseMatrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw DimensionMismatch("error_norms: shape");
  const DenseMatrix diff = sub(estimate, truth);
  return {matrix_norm(diff, NormKind::Frobenius),
          matrix_norm(diff, NormKind::Spectral),
          matrix_norm(diff, NormKind::InducedL1),
          matrix_norm(diff, NormKind::ElementMax)};
}

namespace {
int sign_of(double v) { return (v > 0.0) - (v < 0.0); }
}  // namespace

SignMetrics sign_metrics(const DenseMatrix& truncated, const DenseMatrix& truth) {
  if (truncated.rows() != truth.rows() || truncated.cols() != truth.cols())
    throw DimensionMismatch("sign_metrics: shape");
  bool exact = true;
  std::size_t est_nz = 0, true_nz = 0, overlap = 0;
  for (std::size_t i = 0; i < truth.rows(); ++i)
    for (std::size_t j = 0; j < truth.cols(); ++j) {
      const int se = sign_of(truncated(i, j));
      const int st = sign_of(truth(i, j));
      if (se != st) exact = false;
      if (se != 0) ++est_nz;
      if (st != 0) ++true_nz;
      if (se != 0 && st != 0) ++overlap;
    }
  const double precision =
      est_nz == 0 ? 1.0 : static_cast<double>(overlap) / est_nz;
  const double recall =
      true_nz == 0 ? 1.0 : static_cast<double>(overlap) / true_nz;
  return {exact, precision, recall};
}

std::vector<double> predict_next(
    const std::vector<DenseMatrix>& lags,
    const std::vector<std::vector<double>>& history) {
  if (lags.empty()) throw BadParams("predict_next: no lag matrices");
  const std::size_t p = lags.size();
  const std::size_t d = lags.front().rows();
  if (history.size() != p)
    throw DimensionMismatch("predict_next: history length");
  for (const auto& obs : history)
    if (obs.size() != d) throw DimensionMismatch("predict_next: history dim");

  std::vector<double> out(d, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    const DenseMatrix& lag = lags[k];
    const std::vector<double>& obs = history[p - 1 - k];  // k+1 steps back
    for (std::size_t i = 0; i < d; ++i) {
      const double v = obs[i];
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) out[j] += lag(i, j) * v;
    }
  }
  return out;
}

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Direct: return "direct";
    case EstimatorKind::Lasso: return "lasso";
    case EstimatorKind::Ridge: return "ridge";
  }
  return "unknown";
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "direct") return EstimatorKind::Direct;
  if (name == "lasso") return EstimatorKind::Lasso;
  if (name == "ridge") return EstimatorKind::Ridge;
  throw BadParams("unknown estimator: " + name);
}

std::vector<CvWindow> cv_windows(std::size_t t0, std::size_t n1,
                                 std::size_t n2) {
  std::vector<CvWindow> windows;
  windows.reserve(n2);
  for (std::size_t t = t0 - n2; t <= t0 - 1; ++t)
    windows.push_back({t - n1, n1, t});
  return windows;
}

namespace {

struct FitOutcome {
  bool failed = false;
  std::size_t infeasible = 0;
  double err = 0.0;
};

double one_step_error(const TimeSeries& ts, const CvWindow& win, std::size_t p,
                      const std::vector<DenseMatrix>& lags) {
  const std::size_t d = ts.dim;
  std::vector<std::vector<double>> history(p, std::vector<double>(d));
  for (std::size_t k = 0; k < p; ++k) {
    // chronological: history[0] is the oldest of the last p observations
    const double* row = ts.row(win.target - 1 - p + k);
    std::copy(row, row + d, history[k].begin());
  }
  const std::vector<double> forecast = predict_next(lags, history);
  const double* actual = ts.row(win.target - 1);
  double err2 = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = actual[j] - forecast[j];
    err2 += diff * diff;
  }
  return std::sqrt(err2);
}

// Scores every grid point on one training window. The stacked covariances
// only depend on the lag order, so they are shared across the grid.
void score_window(const TimeSeries& ts, const CvWindow& win,
                  const std::vector<GridPoint>& grid, EstimatorKind method,
                  FitOutcome* out) {
  const TimeSeries train = ts.slice(win.train_first - 1, win.train_len);
  std::vector<std::pair<std::size_t, CovPair>> covs;  // direct method only

  for (std::size_t g = 0; g < grid.size(); ++g) {
    const GridPoint& point = grid[g];
    std::vector<DenseMatrix> lags;
    try {
      switch (method) {
        case EstimatorKind::Direct: {
          const CovPair* cov = nullptr;
          for (const auto& entry : covs)
            if (entry.first == point.p) cov = &entry.second;
          if (cov == nullptr) {
            covs.emplace_back(point.p, sample_covariances(train, point.p));
            cov = &covs.back().second;
          }
          DirectEstimate est =
              estimate_direct_cov(*cov, train.dim, point.lambda);
          out[g].infeasible = est.infeasible_columns();
          lags = std::move(est.lags);
          break;
        }
        case EstimatorKind::Lasso:
          lags = estimate_lasso(train, point.p, point.lambda).lags;
          break;
        case EstimatorKind::Ridge:
          lags = estimate_ridge(train, point.p, point.lambda);
          break;
      }
    } catch (const Error&) {
      out[g].failed = true;
      continue;
    }
    out[g].err = one_step_error(ts, win, point.p, lags);
  }
}

}  // namespace

CvResult cross_validate(const TimeSeries& ts, const std::vector<GridPoint>& grid,
                        std::size_t n1, std::size_t n2, std::size_t t0,
                        EstimatorKind method, unsigned workers) {
  if (grid.empty()) throw BadParams("cross_validate: empty grid");
  if (n1 == 0 || n2 == 0) throw BadParams("cross_validate: empty windows");
  std::size_t max_p = 0;
  for (const auto& g : grid) max_p = std::max(max_p, g.p);
  if (t0 > ts.t_len + 1)
    throw WindowTooLarge("cross_validate: t0 beyond the series end");
  if (t0 < n2 + n1 + max_p + 1)
    throw WindowTooLarge("cross_validate: windows reach before the series start");

  const std::vector<CvWindow> windows = cv_windows(t0, n1, n2);
  // outcomes laid out as [window][grid point]
  std::vector<FitOutcome> outcomes(grid.size() * windows.size());
  parallel_for(windows.size(), workers, [&](std::size_t w) {
    score_window(ts, windows[w], grid, method, &outcomes[w * grid.size()]);
  });

  CvResult result;
  result.grid = grid;
  result.n1 = n1;
  result.n2 = n2;
  result.mean_err.assign(grid.size(),
                         std::numeric_limits<double>::quiet_NaN());
  result.skipped.assign(grid.size(), false);
  result.infeasible_columns.assign(grid.size(), 0);

  bool any_ok = false;
  std::size_t best_idx = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    bool failed = false;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      const FitOutcome& out = outcomes[w * grid.size() + g];
      result.infeasible_columns[g] += out.infeasible;
      if (out.failed) failed = true;
      else sum += out.err;
    }
    if (failed) {
      result.skipped[g] = true;
      continue;
    }
    result.mean_err[g] = sum / static_cast<double>(windows.size());
    if (!any_ok) {
      any_ok = true;
      best_idx = g;
      continue;
    }
    const double cur = result.mean_err[g];
    const double best = result.mean_err[best_idx];
    const bool better =
        cur < best ||
        (cur == best && (grid[g].p < grid[best_idx].p ||
                         (grid[g].p == grid[best_idx].p &&
                          grid[g].lambda > grid[best_idx].lambda)));
    if (better) best_idx = g;
  }
  if (!any_ok)
    throw AllColumnsInfeasible("cross_validate: every grid point failed");
  result.best = grid[best_idx];
  return result;
}

}  // namespace sparsevar
