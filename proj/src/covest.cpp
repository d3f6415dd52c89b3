#include "sparsevar/covest.hpp"

#include <vector>

namespace sparsevar {

namespace {

// Stacked observation t (1-based, t <= T-p+1): (X_{t+p-1}^T, ..., X_t^T)^T.
void fill_stacked(const TimeSeries& ts, std::size_t p, std::size_t t,
                  std::vector<double>& out) {
  const std::size_t d = ts.dim;
  for (std::size_t k = 0; k < p; ++k) {
    const double* row = ts.row(t - 1 + p - 1 - k);
    for (std::size_t j = 0; j < d; ++j) out[k * d + j] = row[j];
  }
}

}  // namespace

CovPair sample_covariances(const TimeSeries& ts, std::size_t p) {
  if (p == 0) throw BadParams("sample_covariances: lag order must be >= 1");
  if (ts.t_len < p + 1)
    throw SeriesTooShort("sample_covariances: need at least p+1 observations");

  const std::size_t d = ts.dim;
  const std::size_t m = d * p;
  const std::size_t n_marginal = ts.t_len - p + 1;
  const std::size_t n_lag = ts.t_len - p;

  DenseMatrix s(m, m);
  DenseMatrix s1(m, m);
  std::vector<double> cur(m, 0.0), nxt(m, 0.0);

  fill_stacked(ts, p, 1, cur);
  for (std::size_t t = 1; t <= n_marginal; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      const double v = cur[i];
      if (v == 0.0) continue;
      double* row = s.row_ptr(i);
      for (std::size_t j = 0; j < m; ++j) row[j] += v * cur[j];
    }
    if (t <= n_lag) {
      fill_stacked(ts, p, t + 1, nxt);
      for (std::size_t i = 0; i < m; ++i) {
        const double v = cur[i];
        if (v == 0.0) continue;
        double* row = s1.row_ptr(i);
        for (std::size_t j = 0; j < m; ++j) row[j] += v * nxt[j];
      }
      cur.swap(nxt);
    }
  }

  const double inv_marginal = 1.0 / static_cast<double>(n_marginal);
  const double inv_lag = 1.0 / static_cast<double>(n_lag);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      s(i, j) *= inv_marginal;
      s1(i, j) *= inv_lag;
    }
  return {symmetrize_average(s), std::move(s1), n_marginal, n_lag};
}

}  // namespace sparsevar
