#pragma once

// Brute-force reference for the column linear program: minimizes ||v||_1 over
// {v : ||S v - b||_inf <= lambda} by enumerating every candidate vertex. A
// minimizer lies at a vertex of the feasible set intersected with a sign
// orthant, so it solves a square system built from coordinate hyperplanes
// v_i = 0 and tight box constraints (S v - b)_j = +-lambda. Practical only
// for small m; completely independent of the simplex implementation.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sparsevar/dense_matrix.hpp"
#include "test_support.hpp"

namespace testsup {

struct OracleResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  std::vector<double> argmin;
};

inline OracleResult l1_min_oracle(const sparsevar::DenseMatrix& s,
                                  const std::vector<double>& b, double lambda) {
  const std::size_t m = s.rows();
  OracleResult best;

  const auto check_candidate = [&](const std::vector<double>& v) {
    for (std::size_t j = 0; j < m; ++j) {
      double r = -b[j];
      for (std::size_t i = 0; i < m; ++i) r += s(j, i) * v[i];
      if (std::abs(r) > lambda + 1e-9) return;
    }
    double obj = 0.0;
    for (double x : v) obj += std::abs(x);
    if (!best.feasible || obj < best.objective) {
      best.feasible = true;
      best.objective = obj;
      best.argmin = v;
    }
  };

  // zero_mask: coordinates pinned to zero; plane_mask over 2m bits: bit h<m
  // means (Sv-b)_h = +lambda, bit h>=m means (Sv-b)_{h-m} = -lambda.
  for (std::uint64_t zero_mask = 0; zero_mask < (1ULL << m); ++zero_mask) {
    const int zeros = std::popcount(zero_mask);
    const std::size_t need = m - static_cast<std::size_t>(zeros);
    for (std::uint64_t plane_mask = 0; plane_mask < (1ULL << (2 * m));
         ++plane_mask) {
      if (static_cast<std::size_t>(std::popcount(plane_mask)) != need) continue;

      std::vector<std::vector<double>> a;
      std::vector<double> rhs;
      for (std::size_t i = 0; i < m; ++i)
        if (zero_mask & (1ULL << i)) {
          std::vector<double> row(m, 0.0);
          row[i] = 1.0;
          a.push_back(std::move(row));
          rhs.push_back(0.0);
        }
      for (std::size_t h = 0; h < 2 * m; ++h) {
        if (!(plane_mask & (1ULL << h))) continue;
        const std::size_t j = h < m ? h : h - m;
        std::vector<double> row(m);
        for (std::size_t i = 0; i < m; ++i) row[i] = s(j, i);
        a.push_back(std::move(row));
        rhs.push_back(h < m ? b[j] + lambda : b[j] - lambda);
      }

      std::vector<double> v;
      if (solve_dense(std::move(a), std::move(rhs), v)) check_candidate(v);
    }
  }
  return best;
}

}  // namespace testsup
