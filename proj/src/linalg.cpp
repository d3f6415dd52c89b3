#include "sparsevar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sparsevar/tolerances.hpp"

namespace sparsevar {

namespace {

void require_symmetric(const DenseMatrix& m, const char* what) {
  if (!m.square()) throw DimensionMismatch(std::string(what) + ": square input");
  const double scale = std::max(1.0, max_abs(m));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol::kSymmetryRel * scale)
        throw BadParams(std::string(what) + ": input not symmetric");
}

}  // namespace

DenseMatrix cholesky(const DenseMatrix& m) {
  require_symmetric(m, "cholesky");
  const std::size_t n = m.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, m(i, i));
  if (max_diag <= 0.0)
    throw NotPositiveDefinite("cholesky: nonpositive diagonal");
  const double pivot_floor = tol::kCholPivotRel * max_diag;

  DenseMatrix lower(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    if (diag <= pivot_floor)
      throw NotPositiveDefinite("cholesky: pivot underflow");
    const double ljj = std::sqrt(diag);
    lower(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k);
      lower(i, j) = v / ljj;
    }
  }
  return lower;
}

DenseMatrix solve_spd(const DenseMatrix& m, const DenseMatrix& rhs) {
  if (rhs.rows() != m.cols())
    throw DimensionMismatch("solve_spd: rhs rows");
  const DenseMatrix lower = cholesky(m);
  const std::size_t n = m.rows();
  const std::size_t k = rhs.cols();
  DenseMatrix x(n, k);

  // forward: L y = rhs
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = rhs(i, c);
      for (std::size_t j = 0; j < i; ++j) v -= lower(i, j) * x(j, c);
      x(i, c) = v / lower(i, i);
    }
  }
  // backward: L^T x = y
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t ii = n; ii-- > 0;) {
      double v = x(ii, c);
      for (std::size_t j = ii + 1; j < n; ++j) v -= lower(j, ii) * x(j, c);
      x(ii, c) = v / lower(ii, ii);
    }
  }
  return x;
}

namespace {

// Largest eigenvalue of the (implicitly formed) Gram matrix m^T m by power
// iteration; returns sigma_max(m)^2.
double gram_power_iteration(const DenseMatrix& m) {
  const std::size_t n = m.cols();
  // Form the Gram matrix once; iterations then cost O(n^2).
  DenseMatrix gram(n, n);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = m.row_ptr(i);
    for (std::size_t a = 0; a < n; ++a) {
      const double ra = row[a];
      if (ra == 0.0) continue;
      double* g = gram.row_ptr(a);
      for (std::size_t b = 0; b < n; ++b) g[b] += ra * row[b];
    }
  }

  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(n, 0.0);
  double lambda = 0.0;
  bool restarted = false;
  for (int it = 0; it < tol::kPowerIterMax; ++it) {
    for (std::size_t a = 0; a < n; ++a) {
      const double* g = gram.row_ptr(a);
      double s = 0.0;
      for (std::size_t b = 0; b < n; ++b) s += g[b] * v[b];
      w[a] = s;
    }
    double norm2 = 0.0, rayleigh = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      norm2 += w[a] * w[a];
      rayleigh += w[a] * v[a];
    }
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) {
      // The start vector sits in the kernel. Restart once from a fixed
      // alternating-sign vector; if that is also annihilated, the norm is 0.
      if (restarted) return 0.0;
      restarted = true;
      for (std::size_t a = 0; a < n; ++a)
        v[a] = ((a % 2) ? -1.0 : 1.0) / std::sqrt(static_cast<double>(n));
      lambda = 0.0;
      continue;
    }
    for (std::size_t a = 0; a < n; ++a) v[a] = w[a] / norm;
    if (std::abs(rayleigh - lambda) <= tol::kPowerIterRel * std::max(rayleigh, 1e-300))
      return rayleigh;
    lambda = rayleigh;
  }
  return lambda;
}

}  // namespace

double matrix_norm(const DenseMatrix& m, NormKind kind) {
  switch (kind) {
    case NormKind::Frobenius: {
      double s = 0.0;
      for (double v : m.data()) s += v * v;
      return std::sqrt(s);
    }
    case NormKind::ElementMax:
      return max_abs(m);
    case NormKind::InducedL1: {
      double best = 0.0;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::InducedLinf: {
      double best = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::Spectral: {
      if (max_abs(m) == 0.0) return 0.0;
      return std::sqrt(std::max(0.0, gram_power_iteration(m)));
    }
  }
  throw BadParams("matrix_norm: unknown kind");
}

double spectral_radius_bound(const DenseMatrix& m, unsigned power) {
  if (!m.square()) throw DimensionMismatch("spectral_radius_bound: square input");
  if (power == 0 || (power & (power - 1)) != 0)
    throw BadParams("spectral_radius_bound: power must be a power of two");

  DenseMatrix acc = m;
  unsigned cur = 1;
  while (cur < power) {
    acc = matmul(acc, acc);
    cur *= 2;
    if (max_abs(acc) > tol::kOverflowGuard)
      throw OverflowError("spectral_radius_bound: matrix power diverged");
  }
  const double norm = matrix_norm(acc, NormKind::Spectral);
  if (norm == 0.0) return 0.0;
  return std::pow(norm, 1.0 / static_cast<double>(power));
}

bool is_psd_within(const DenseMatrix& m, double pivot_tol) {
  if (!m.square()) throw DimensionMismatch("is_psd_within: square input");
  const std::size_t n = m.rows();
  DenseMatrix work = m;
  std::vector<bool> done(n, false);
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, work(i, i));
  const double floor = pivot_tol * scale;

  for (std::size_t step = 0; step < n; ++step) {
    // pick the largest remaining diagonal as pivot
    std::size_t p = n;
    double best = -1e300;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && work(i, i) > best) { best = work(i, i); p = i; }
    if (best < -floor) return false;
    if (best <= floor) {
      // Remaining block is numerically zero-diagonal; it is PSD only if the
      // remaining off-diagonal mass is negligible too.
      double off = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (!done[j] && i != j) off = std::max(off, std::abs(work(i, j)));
      }
      return off <= 10.0 * std::sqrt(std::max(floor, 0.0) * scale) + floor;
    }
    done[p] = true;
    // Schur-complement update of the remaining block.
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const double f = work(i, p) / best;
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j]) work(i, j) -= f * work(p, j);
    }
  }
  return true;
}

}  // namespace sparsevar
