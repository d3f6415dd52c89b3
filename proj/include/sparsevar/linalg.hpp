#pragma once

#include "sparsevar/dense_matrix.hpp"

namespace sparsevar {

enum class NormKind { Frobenius, Spectral, InducedL1, InducedLinf, ElementMax };

// Lower-triangular factor L with L L^T = m. The input must be symmetric
// positive definite; a pivot at or below tol::kCholPivotRel * max(diag)
// raises NotPositiveDefinite.
DenseMatrix cholesky(const DenseMatrix& m);

// Solves m x = rhs for SPD m via Cholesky. rhs may have several columns.
DenseMatrix solve_spd(const DenseMatrix& m, const DenseMatrix& rhs);

// Matrix norms. Spectral uses power iteration on m^T m with a fixed start
// vector (normalized all-ones), relative tolerance tol::kPowerIterRel and at
// most tol::kPowerIterMax iterations.
double matrix_norm(const DenseMatrix& m, NormKind kind);

// ||m^power||_2^(1/power) computed by repeated squaring; an upper bound on
// the spectral radius of m. `power` must be a power of two. Raises
// OverflowError if an intermediate power blows past tol::kOverflowGuard.
double spectral_radius_bound(const DenseMatrix& m, unsigned power = 32);

// Diagonal-pivoted Cholesky test for positive semidefiniteness: accepts
// pivots down to -pivot_tol * scale where scale = max(1, max diagonal).
bool is_psd_within(const DenseMatrix& m, double pivot_tol);

}  // namespace sparsevar
