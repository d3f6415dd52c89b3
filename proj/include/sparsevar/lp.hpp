#pragma once

#include <cstddef>
#include <vector>

#include "sparsevar/dense_matrix.hpp"

namespace sparsevar {

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

// Standardized linear program for one response column:
//   minimize 1^T omega  subject to  theta + w * omega >= 0, omega >= 0,
// where omega stacks the positive and negative parts of the coefficient
// vector, w = [[-S, S], [S, -S]] and theta = [col + l*1; -col + l*1].
struct ColumnLp {
  std::vector<double> theta;  // length 2m
  DenseMatrix w;              // 2m x 2m
  std::size_t m;
};

struct LpSolution {
  std::vector<double> omega;  // length 2m, entrywise >= 0 when Optimal
  double objective;           // sum of omega when Optimal
  LpStatus status;
  std::size_t pivots;
};

ColumnLp build_column_lp(const DenseMatrix& s, const std::vector<double>& s1_col,
                         double lambda0);

// General-form entry point: minimize c^T x subject to a x >= b, x >= 0.
// Two-phase dense-tableau simplex; phase 1 is skipped when b <= 0 entrywise
// (x = 0 is then feasible). Deterministic: most-negative-reduced-cost
// pivoting with smallest-index tie-breaks, falling back to Bland's rule when
// the objective stalls on degenerate pivots.
LpSolution solve_general_form(const std::vector<double>& c, const DenseMatrix& a,
                              const std::vector<double>& b);

LpSolution solve_simplex(const ColumnLp& lp);

// Coefficient vector from an optimal solution: v_i = omega_i - omega_{m+i}.
std::vector<double> recover_beta(const LpSolution& sol, std::size_t m);

}  // namespace sparsevar
