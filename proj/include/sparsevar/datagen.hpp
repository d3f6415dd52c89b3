#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsevar/dense_matrix.hpp"
#include "sparsevar/varproc.hpp"

namespace sparsevar {

enum class PatternTag { Band, Cluster, Hub, Random, ScaleFree };

const char* to_string(PatternTag tag);
PatternTag pattern_from_string(const std::string& name);

// Sparsity pattern of a transition matrix. Exactly one of the parameter
// fields is read, selected by `tag`.
struct PatternKind {
  PatternTag tag;
  std::size_t bandwidth = 2;     // Band
  std::size_t block_size = 0;    // Cluster (0: d/5)
  std::size_t hub_count = 0;     // Hub (0: d/10)
  double edge_prob = -1.0;       // Random (<0: 3/d)
  std::size_t attach_count = 2;  // ScaleFree
};

struct SigmaSpec {
  enum class Tag { DiagonalScaled, Toeplitz } tag;
  double rho = 0.0;  // Toeplitz decay, in (0,1)
};

// Support per pattern, diagonal always included; nonzero magnitudes are 0.5
// with independent uniform signs from the seeded stream.
DenseMatrix gen_pattern(const PatternKind& kind, std::size_t d,
                        std::uint64_t seed);

// a * (kappa / ||a||_2)
DenseMatrix rescale_spectral(const DenseMatrix& a, double kappa);

// DiagonalScaled: 2 * a1_norm2 * I. Toeplitz: entries rho^|i-j|.
DenseMatrix make_sigma(const SigmaSpec& spec, std::size_t d, double a1_norm2);

// Noise covariance that makes `sigma` the stationary covariance of the
// order-1 model with transition a1: sigma - a1^T sigma a1 (symmetrized,
// verified positive semidefinite).
DenseMatrix derive_psi(const DenseMatrix& sigma, const DenseMatrix& a1);

// Rescales every lag pattern to spectral norm kappa_per_lag, assembles the
// model with the given noise covariance and solves for the stationary
// covariance of the stacked state.
struct GeneratedModel {
  VarModel model;
  DenseMatrix sigma_tilde;  // dp x dp stationary covariance
};

GeneratedModel make_varp_model(const std::vector<DenseMatrix>& patterns,
                               double kappa_per_lag, const DenseMatrix& psi);

}  // namespace sparsevar
