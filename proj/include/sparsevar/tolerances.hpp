#pragma once

// Every numerical tolerance used by the library lives here so that code,
// tests and docs agree on one value.

namespace sparsevar::tol {

// Cholesky: a pivot at or below kCholPivotRel * max(diag) fails the
// factorization.
inline constexpr double kCholPivotRel = 1e-12;

// Relative symmetry slack accepted by routines that require symmetric input.
inline constexpr double kSymmetryRel = 1e-10;

// Power iteration for the spectral norm.
inline constexpr double kPowerIterRel = 1e-10;
inline constexpr int kPowerIterMax = 10000;

// Fixed-point iteration for the discrete Lyapunov equation.
inline constexpr double kLyapunovStep = 1e-12;
inline constexpr double kLyapunovResidual = 1e-10;
inline constexpr int kLyapunovMaxIter = 100000;

// Simplex pivot magnitude and constraint feasibility slack.
inline constexpr double kSimplexPivot = 1e-9;
inline constexpr double kFeasibilitySlack = 1e-9;

// Semidefiniteness check: smallest accepted pivot is -kPsdPivot * scale.
inline constexpr double kPsdPivot = 1e-10;

// Margin on the companion spectral-radius bound used for stationarity.
inline constexpr double kStationarityMargin = 1e-6;

// Coordinate-descent lasso stopping rule.
inline constexpr double kLassoTol = 1e-7;
inline constexpr int kLassoMaxSweeps = 10000;

// Entries beyond this magnitude abort matrix powers as divergent.
inline constexpr double kOverflowGuard = 1e150;

}  // namespace sparsevar::tol
