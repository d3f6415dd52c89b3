#include "sparsevar/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsevar/tolerances.hpp"

namespace sparsevar {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

ColumnLp build_column_lp(const DenseMatrix& s, const std::vector<double>& s1_col,
                         double lambda0) {
  if (!s.square()) throw DimensionMismatch("build_column_lp: s must be square");
  const std::size_t m = s.rows();
  if (s1_col.size() != m)
    throw DimensionMismatch("build_column_lp: column length");
  if (lambda0 < 0.0) throw BadParams("build_column_lp: negative lambda0");

  ColumnLp lp{std::vector<double>(2 * m), DenseMatrix(2 * m, 2 * m), m};
  for (std::size_t i = 0; i < m; ++i) {
    lp.theta[i] = s1_col[i] + lambda0;
    lp.theta[m + i] = -s1_col[i] + lambda0;
    for (std::size_t j = 0; j < m; ++j) {
      const double v = s(i, j);
      lp.w(i, j) = -v;
      lp.w(i, m + j) = v;
      lp.w(m + i, j) = v;
      lp.w(m + i, m + j) = -v;
    }
  }
  return lp;
}

namespace {

// Dense two-phase tableau simplex for: min c^T x, a x >= b, x >= 0.
class SimplexTableau {
 public:
  SimplexTableau(const std::vector<double>& c, const DenseMatrix& a,
                 const std::vector<double>& b)
      : n_(c.size()), k_(b.size()) {
    if (a.rows() != k_ || a.cols() != n_)
      throw DimensionMismatch("simplex: constraint shape");

    // Count artificials: rows with positive rhs keep their sign and need one.
    n_art_ = 0;
    for (double v : b)
      if (v > 0.0) ++n_art_;

    width_ = n_ + k_ + n_art_ + 1;
    rows_ = k_ + 2;  // constraints + phase-2 cost row + phase-1 cost row
    tab_.assign(rows_ * width_, 0.0);
    basis_.assign(k_, 0);
    dead_.assign(k_, false);
    allowed_.assign(n_ + k_ + n_art_, true);

    std::size_t art = 0;
    for (std::size_t r = 0; r < k_; ++r) {
      double* row = row_ptr(r);
      const double sign = (b[r] > 0.0) ? 1.0 : -1.0;
      for (std::size_t j = 0; j < n_; ++j) row[j] = sign * a(r, j);
      row[n_ + r] = -sign;  // slack: a x - s = b
      row[width_ - 1] = sign * b[r];
      if (b[r] > 0.0) {
        const std::size_t aj = n_ + k_ + art;
        row[aj] = 1.0;
        basis_[r] = aj;
        ++art;
      } else {
        basis_[r] = n_ + r;
      }
    }

    // Phase-2 reduced costs start as the raw costs.
    double* cost = row_ptr(k_);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = c[j];

    if (n_art_ > 0) {
      // Phase-1 costs: 1 on artificials, then eliminate the basic ones.
      double* p1 = row_ptr(k_ + 1);
      for (std::size_t j = 0; j < n_art_; ++j) p1[n_ + k_ + j] = 1.0;
      for (std::size_t r = 0; r < k_; ++r)
        if (basis_[r] >= n_ + k_) add_scaled(k_ + 1, r, -1.0);
    }
  }

  LpStatus run(std::vector<double>* x, double* objective,
               std::size_t* pivots) {
    phase1_ = n_art_ > 0;
    if (phase1_) {
      const LpStatus st = iterate(k_ + 1);
      if (st != LpStatus::Optimal)
        throw Error("simplex: phase 1 terminated abnormally");
      if (-row_ptr(k_ + 1)[width_ - 1] > tol::kFeasibilitySlack) {
        *pivots = pivot_count_;
        return LpStatus::Infeasible;
      }
      evict_artificials();
      for (std::size_t j = n_ + k_; j < n_ + k_ + n_art_; ++j)
        allowed_[j] = false;
      phase1_ = false;
    }

    const LpStatus st = iterate(k_);
    *pivots = pivot_count_;
    if (st != LpStatus::Optimal) return st;

    x->assign(n_, 0.0);
    for (std::size_t r = 0; r < k_; ++r) {
      if (dead_[r]) continue;
      const std::size_t j = basis_[r];
      if (j < n_) (*x)[j] = std::max(0.0, row_ptr(r)[width_ - 1]);
    }
    *objective = 0.0;
    return LpStatus::Optimal;
  }

 private:
  double* row_ptr(std::size_t r) { return tab_.data() + r * width_; }

  void add_scaled(std::size_t dst_row, std::size_t src_row, double f) {
    double* dst = row_ptr(dst_row);
    const double* src = row_ptr(src_row);
    for (std::size_t j = 0; j < width_; ++j) dst[j] += f * src[j];
  }

  void pivot(std::size_t pr, std::size_t pc) {
    double* prow = row_ptr(pr);
    const double inv = 1.0 / prow[pc];
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    const std::size_t active_rows = phase1_ ? rows_ : k_ + 1;
    for (std::size_t r = 0; r < active_rows; ++r) {
      if (r == pr) continue;
      double* row = row_ptr(r);
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[pc] = 0.0;
    }
    basis_[pr] = pc;
    ++pivot_count_;
  }

  // Runs simplex iterations against the cost row `cost_r`.
  LpStatus iterate(std::size_t cost_r) {
    const std::size_t ncols = n_ + k_ + n_art_;
    std::size_t stall = 0;
    bool bland = false;
    double last_obj = -row_ptr(cost_r)[width_ - 1];

    for (std::size_t it = 0; it < kIterationCap; ++it) {
      const double* cost = row_ptr(cost_r);
      std::size_t pc = ncols;
      if (!bland) {
        double best = -tol::kSimplexPivot;
        for (std::size_t j = 0; j < ncols; ++j)
          if (allowed_[j] && cost[j] < best) { best = cost[j]; pc = j; }
      } else {
        for (std::size_t j = 0; j < ncols; ++j)
          if (allowed_[j] && cost[j] < -tol::kSimplexPivot) { pc = j; break; }
      }
      if (pc == ncols) return LpStatus::Optimal;

      // Ratio test; ties broken toward the smallest basis index.
      std::size_t pr = k_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < k_; ++r) {
        if (dead_[r]) continue;
        const double* row = row_ptr(r);
        const double coef = row[pc];
        if (coef <= tol::kSimplexPivot) continue;
        const double ratio = row[width_ - 1] / coef;
        if (ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 &&
             (pr == k_ || basis_[r] < basis_[pr]))) {
          best_ratio = ratio;
          pr = r;
        }
      }
      if (pr == k_) return LpStatus::Unbounded;

      pivot(pr, pc);

      const double obj = -row_ptr(cost_r)[width_ - 1];
      if (!bland) {
        if (obj < last_obj - 1e-13 * (1.0 + std::abs(last_obj))) {
          stall = 0;
        } else if (++stall > kStallLimit) {
          bland = true;  // anti-cycling fallback
        }
      }
      last_obj = obj;
    }
    throw NoConvergence("simplex: iteration cap reached");
  }

  // After a feasible phase 1, pivot leftover artificials out of the basis
  // (their values are within the feasibility tolerance); rows that admit no
  // pivot are redundant.
  void evict_artificials() {
    for (std::size_t r = 0; r < k_; ++r) {
      if (basis_[r] < n_ + k_) continue;
      row_ptr(r)[width_ - 1] = 0.0;  // residual is below the tolerance
      const double* row = row_ptr(r);
      std::size_t pc = n_ + k_;
      for (std::size_t j = 0; j < n_ + k_; ++j)
        if (std::abs(row[j]) > tol::kSimplexPivot) { pc = j; break; }
      if (pc == n_ + k_) {
        dead_[r] = true;
      } else {
        pivot(r, pc);
      }
    }
  }

  static constexpr std::size_t kIterationCap = 200000;
  static constexpr std::size_t kStallLimit = 256;

  std::size_t n_, k_, n_art_, width_, rows_;
  std::vector<double> tab_;
  std::vector<std::size_t> basis_;
  std::vector<bool> dead_;
  std::vector<bool> allowed_;
  std::size_t pivot_count_ = 0;
  bool phase1_ = false;
};

}  // namespace

LpSolution solve_general_form(const std::vector<double>& c, const DenseMatrix& a,
                              const std::vector<double>& b) {
  SimplexTableau tableau(c, a, b);
  LpSolution sol;
  sol.status = tableau.run(&sol.omega, &sol.objective, &sol.pivots);
  if (sol.status == LpStatus::Optimal) {
    double obj = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) obj += c[j] * sol.omega[j];
    sol.objective = obj;
  } else {
    sol.omega.assign(c.size(), 0.0);
    sol.objective = std::numeric_limits<double>::quiet_NaN();
  }
  return sol;
}

LpSolution solve_simplex(const ColumnLp& lp) {
  const std::size_t n = 2 * lp.m;
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = -lp.theta[i];
  const std::vector<double> cost(n, 1.0);
  LpSolution sol = solve_general_form(cost, lp.w, b);

  if (sol.status == LpStatus::Optimal) {
    double obj = 0.0;
    for (double v : sol.omega) obj += v;
    sol.objective = obj;
    // Re-check the constraints the caller will rely on.
    for (std::size_t i = 0; i < n; ++i) {
      double lhs = lp.theta[i];
      const double* wrow = lp.w.row_ptr(i);
      for (std::size_t j = 0; j < n; ++j) lhs += wrow[j] * sol.omega[j];
      if (lhs < -tol::kFeasibilitySlack)
        throw Error("solve_simplex: optimal vertex failed feasibility re-check");
    }
  }
  return sol;
}

std::vector<double> recover_beta(const LpSolution& sol, std::size_t m) {
  if (sol.status != LpStatus::Optimal)
    throw NotOptimal("recover_beta: solution is not optimal");
  if (sol.omega.size() != 2 * m)
    throw DimensionMismatch("recover_beta: omega length");
  std::vector<double> beta(m);
  for (std::size_t i = 0; i < m; ++i) beta[i] = sol.omega[i] - sol.omega[m + i];
  return beta;
}

}  // namespace sparsevar
