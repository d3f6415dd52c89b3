#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sparsevar/datagen.hpp"
#include "sparsevar/linalg.hpp"
#include "sparsevar/tolerances.hpp"
#include "test_support.hpp"

using namespace sparsevar;
using testsup::random_matrix;

namespace {

std::size_t undirected_degree(const DenseMatrix& m, std::size_t node) {
  std::size_t deg = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (j == node) continue;
    if (m(node, j) != 0.0 || m(j, node) != 0.0) ++deg;
  }
  return deg;
}

std::size_t max_degree(const DenseMatrix& m) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    best = std::max(best, undirected_degree(m, i));
  return best;
}

}  // namespace

TEST_CASE("band pattern support") {
  PatternKind kind{PatternTag::Band};
  kind.bandwidth = 1;
  const DenseMatrix m = gen_pattern(kind, 3, 1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const bool in_band = (i > j ? i - j : j - i) <= 1;
      if (in_band) CHECK(std::abs(m(i, j)) == 0.5);
      else CHECK(m(i, j) == 0.0);
    }
}

TEST_CASE("random pattern with zero edge probability is diagonal") {
  PatternKind kind{PatternTag::Random};
  kind.edge_prob = 0.0;
  const DenseMatrix m = gen_pattern(kind, 5, 2);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      if (i == j) CHECK(std::abs(m(i, j)) == 0.5);
      else CHECK(m(i, j) == 0.0);
    }
}

TEST_CASE("cluster pattern is block diagonal") {
  PatternKind kind{PatternTag::Cluster};
  kind.block_size = 3;
  const DenseMatrix m = gen_pattern(kind, 7, 3);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) {
      const bool same_block = (i / 3) == (j / 3);
      CHECK((m(i, j) != 0.0) == same_block);
    }
}

TEST_CASE("hub pattern has dense designated rows and columns") {
  PatternKind kind{PatternTag::Hub};
  kind.hub_count = 2;
  const DenseMatrix m = gen_pattern(kind, 8, 4);
  std::vector<std::size_t> hubs{0, 4};  // evenly spaced
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      const bool is_hub_line =
          i == j || i == hubs[0] || i == hubs[1] || j == hubs[0] || j == hubs[1];
      CHECK((m(i, j) != 0.0) == is_hub_line);
    }
}

TEST_CASE("scale-free support is symmetric with its own values") {
  PatternKind kind{PatternTag::ScaleFree};
  kind.attach_count = 2;
  const DenseMatrix m = gen_pattern(kind, 30, 5);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j)
      CHECK((m(i, j) != 0.0) == (m(j, i) != 0.0));
}

TEST_CASE("scale-free degrees are heavier tailed than a matched random graph") {
  PatternKind sf{PatternTag::ScaleFree};
  sf.attach_count = 1;
  PatternKind er{PatternTag::Random};
  er.edge_prob = 1.0 / 200.0;  // matches d-1 expected undirected edges
  int sf_wins = 0;
  for (int seed = 0; seed < 50; ++seed) {
    const std::size_t sf_deg = max_degree(gen_pattern(sf, 200, seed));
    const std::size_t er_deg = max_degree(gen_pattern(er, 200, seed));
    if (sf_deg > er_deg) ++sf_wins;
  }
  CHECK(sf_wins >= 45);  // >= 90% of seeds
}

TEST_CASE("gen_pattern is deterministic in the seed and validates input") {
  PatternKind kind{PatternTag::Band};
  kind.bandwidth = 2;
  CHECK(gen_pattern(kind, 10, 9) == gen_pattern(kind, 10, 9));
  CHECK(gen_pattern(kind, 10, 9) != gen_pattern(kind, 10, 10));
  CHECK_THROWS_AS(gen_pattern(kind, 1, 0), BadParams);
  kind.bandwidth = 0;
  CHECK_THROWS_AS(gen_pattern(kind, 5, 0), BadParams);
  PatternKind bad{PatternTag::Random};
  bad.edge_prob = 1.5;
  CHECK_THROWS_AS(gen_pattern(bad, 5, 0), BadParams);
}

TEST_CASE("rescale_spectral") {
  const DenseMatrix half = rescale_spectral(DenseMatrix::identity(3), 0.5);
  CHECK(max_abs_diff(half, scale(DenseMatrix::identity(3), 0.5)) < 1e-12);

  const CounterRng rng(91);
  std::uint64_t draw = 0;
  const DenseMatrix m = random_matrix(rng, draw, 6, 6);
  const DenseMatrix scaled = rescale_spectral(m, 0.7);
  CHECK(std::abs(matrix_norm(scaled, NormKind::Spectral) - 0.7) < 1e-8);

  // fixed point: rescaling an already rescaled matrix changes nothing
  CHECK(max_abs_diff(rescale_spectral(scaled, 0.7), scaled) < 1e-12);

  // support preservation: exact zeros stay exact zeros
  PatternKind kind{PatternTag::Band};
  kind.bandwidth = 1;
  const DenseMatrix pattern = gen_pattern(kind, 6, 3);
  const DenseMatrix rescaled = rescale_spectral(pattern, 0.5);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      CHECK((pattern(i, j) == 0.0) == (rescaled(i, j) == 0.0));

  CHECK_THROWS_AS(rescale_spectral(DenseMatrix(3, 3), 0.5), ZeroMatrix);
  CHECK_THROWS_AS(rescale_spectral(m, 0.0), BadParams);
}

TEST_CASE("make_sigma") {
  const DenseMatrix diag =
      make_sigma({SigmaSpec::Tag::DiagonalScaled, 0.0}, 4, 0.5);
  CHECK(diag == DenseMatrix::identity(4));

  const DenseMatrix toe = make_sigma({SigmaSpec::Tag::Toeplitz, 0.5}, 3, 0.0);
  CHECK(toe == DenseMatrix(3, 3, {1, 0.5, 0.25, 0.5, 1, 0.5, 0.25, 0.5, 1}));

  const DenseMatrix nearly_id =
      make_sigma({SigmaSpec::Tag::Toeplitz, 1e-12}, 3, 0.0);
  CHECK(max_abs_diff(nearly_id, DenseMatrix::identity(3)) < 1e-11);

  CHECK_THROWS_AS(make_sigma({SigmaSpec::Tag::Toeplitz, 1.5}, 3, 0.0),
                  BadParams);
}

TEST_CASE("derive_psi") {
  const DenseMatrix sigma = scale(DenseMatrix::identity(3), 2.0);
  CHECK(derive_psi(sigma, DenseMatrix(3, 3)) == sigma);

  const DenseMatrix psi =
      derive_psi(DenseMatrix::identity(2), scale(DenseMatrix::identity(2), 0.5));
  CHECK(max_abs_diff(psi, scale(DenseMatrix::identity(2), 0.75)) < 1e-15);

  CHECK_THROWS_AS(
      derive_psi(DenseMatrix::identity(2), scale(DenseMatrix::identity(2), 1.2)),
      NotPsd);
}

TEST_CASE("derive_psi round-trips through the stationary covariance") {
  const CounterRng rng(92);
  std::uint64_t draw = 0;
  for (int rep = 0; rep < 10; ++rep) {
    // well-conditioned covariance and a mild transition keep psi PSD
    DenseMatrix sigma = testsup::random_symmetric(rng, draw, 3, 0.2);
    for (std::size_t i = 0; i < 3; ++i) sigma(i, i) += 1.0;
    const DenseMatrix a1 =
        rescale_spectral(random_matrix(rng, draw, 3, 3), 0.4);
    const DenseMatrix psi = derive_psi(sigma, a1);
    const VarModel model({a1}, psi);
    REQUIRE(is_stationary(model));
    CHECK(max_abs_diff(stationary_covariance(model), sigma) < 1e-8);
  }
}

TEST_CASE("make_varp_model") {
  PatternKind hub{PatternTag::Hub};
  hub.hub_count = 2;
  std::vector<DenseMatrix> patterns;
  for (int k = 0; k < 3; ++k) patterns.push_back(gen_pattern(hub, 12, 40 + k));

  const GeneratedModel gen =
      make_varp_model(patterns, 0.1, DenseMatrix::identity(12));
  CHECK(is_stationary(gen.model));
  for (const auto& lag : gen.model.transitions)
    CHECK(std::abs(matrix_norm(lag, NormKind::Spectral) - 0.1) < 1e-8);

  const CompanionForm companion = augment(gen.model);
  const DenseMatrix lhs =
      add(matmul(transpose(companion.a_tilde),
                 matmul(gen.sigma_tilde, companion.a_tilde)),
          companion.psi_tilde);
  CHECK(max_abs_diff(lhs, gen.sigma_tilde) < 1e-10);
}

TEST_CASE("make_varp_model handles the largest multi-lag setting") {
  PatternKind rnd{PatternTag::Random};
  rnd.edge_prob = 3.0 / 20.0;
  std::vector<DenseMatrix> patterns;
  for (int k = 0; k < 9; ++k) patterns.push_back(gen_pattern(rnd, 20, 50 + k));
  const GeneratedModel gen =
      make_varp_model(patterns, 0.1, DenseMatrix::identity(20));
  CHECK(is_stationary(gen.model));
  CHECK(gen.model.p == 9);
}

TEST_CASE("p = 1 generation composes the single-lag path") {
  PatternKind band{PatternTag::Band};
  band.bandwidth = 2;
  const DenseMatrix pattern = gen_pattern(band, 8, 7);
  const GeneratedModel gen =
      make_varp_model({pattern}, 0.5, DenseMatrix::identity(8));
  CHECK(gen.model.p == 1);
  CHECK(max_abs_diff(gen.model.transitions[0], rescale_spectral(pattern, 0.5)) ==
        0.0);
}
