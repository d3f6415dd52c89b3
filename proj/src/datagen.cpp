#include "sparsevar/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparsevar/linalg.hpp"
#include "sparsevar/rng.hpp"
#include "sparsevar/tolerances.hpp"

namespace sparsevar {

const char* to_string(PatternTag tag) {
  switch (tag) {
    case PatternTag::Band: return "band";
    case PatternTag::Cluster: return "cluster";
    case PatternTag::Hub: return "hub";
    case PatternTag::Random: return "random";
    case PatternTag::ScaleFree: return "scale-free";
  }
  return "unknown";
}

PatternTag pattern_from_string(const std::string& name) {
  if (name == "band") return PatternTag::Band;
  if (name == "cluster") return PatternTag::Cluster;
  if (name == "hub") return PatternTag::Hub;
  if (name == "random") return PatternTag::Random;
  if (name == "scale-free" || name == "scalefree") return PatternTag::ScaleFree;
  throw BadParams("unknown pattern: " + name);
}

namespace {

// Support mask of an undirected preferential-attachment graph: new nodes
// attach `attach` edges to existing nodes with probability proportional to
// degree, tracked by repeating endpoints in a sampling pool.
std::vector<bool> scale_free_support(std::size_t d, std::size_t attach,
                                     const CounterRng& rng,
                                     std::uint64_t& draw) {
  std::vector<bool> edge(d * d, false);
  std::vector<std::size_t> pool;
  pool.reserve(2 * d * attach);

  const std::size_t init = attach + 1;  // line graph on the first nodes
  for (std::size_t i = 0; i + 1 < init; ++i) {
    edge[i * d + (i + 1)] = edge[(i + 1) * d + i] = true;
    pool.push_back(i);
    pool.push_back(i + 1);
  }
  for (std::size_t v = init; v < d; ++v) {
    std::size_t added = 0;
    while (added < attach) {
      const std::size_t target = pool[rng.below(draw++, pool.size())];
      if (target == v || edge[v * d + target]) continue;
      edge[v * d + target] = edge[target * d + v] = true;
      pool.push_back(target);
      ++added;
    }
    for (std::size_t k = 0; k < attach; ++k) pool.push_back(v);
  }
  return edge;
}

}  // namespace

DenseMatrix gen_pattern(const PatternKind& kind, std::size_t d,
                        std::uint64_t seed) {
  if (d < 2) throw BadParams("gen_pattern: d must be at least 2");
  const CounterRng rng(seed);
  std::uint64_t draw = 0;

  std::vector<bool> support(d * d, false);
  for (std::size_t i = 0; i < d; ++i) support[i * d + i] = true;

  switch (kind.tag) {
    case PatternTag::Band: {
      const std::size_t bw = kind.bandwidth;
      if (bw == 0 || bw > d) throw BadParams("gen_pattern: bandwidth");
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          if (i != j && (i > j ? i - j : j - i) <= bw) support[i * d + j] = true;
      break;
    }
    case PatternTag::Cluster: {
      std::size_t bs = kind.block_size ? kind.block_size : std::max<std::size_t>(1, d / 5);
      if (bs > d) throw BadParams("gen_pattern: block size");
      for (std::size_t start = 0; start < d; start += bs) {
        const std::size_t end = std::min(start + bs, d);
        for (std::size_t i = start; i < end; ++i)
          for (std::size_t j = start; j < end; ++j) support[i * d + j] = true;
      }
      break;
    }
    case PatternTag::Hub: {
      std::size_t hubs = kind.hub_count ? kind.hub_count : std::max<std::size_t>(1, d / 10);
      if (hubs > d) throw BadParams("gen_pattern: hub count");
      for (std::size_t h = 0; h < hubs; ++h) {
        const std::size_t idx = h * d / hubs;  // evenly spaced hub nodes
        for (std::size_t j = 0; j < d; ++j) {
          support[idx * d + j] = true;
          support[j * d + idx] = true;
        }
      }
      break;
    }
    case PatternTag::Random: {
      const double prob =
          kind.edge_prob >= 0.0 ? kind.edge_prob : 3.0 / static_cast<double>(d);
      if (prob > 1.0) throw BadParams("gen_pattern: edge probability");
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          if (i != j && rng.uniform(draw++) < prob) support[i * d + j] = true;
      break;
    }
    case PatternTag::ScaleFree: {
      const std::size_t attach = kind.attach_count;
      if (attach == 0 || attach + 1 > d) throw BadParams("gen_pattern: attach count");
      const std::vector<bool> edge = scale_free_support(d, attach, rng, draw);
      for (std::size_t i = 0; i < d * d; ++i)
        if (edge[i]) support[i] = true;
      break;
    }
  }

  // Values: +-0.5, signs from a separate region of the stream so support and
  // signs stay independent draws.
  DenseMatrix out(d, d);
  std::uint64_t sign_draw = 1'000'000'000ULL;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (support[i * d + j])
        out(i, j) = (rng.bits(sign_draw++) & 1ULL) ? 0.5 : -0.5;
  return out;
}

DenseMatrix rescale_spectral(const DenseMatrix& a, double kappa) {
  if (kappa <= 0.0) throw BadParams("rescale_spectral: kappa must be positive");
  const double norm = matrix_norm(a, NormKind::Spectral);
  if (norm == 0.0) throw ZeroMatrix("rescale_spectral: zero matrix");
  return scale(a, kappa / norm);
}

DenseMatrix make_sigma(const SigmaSpec& spec, std::size_t d, double a1_norm2) {
  if (d == 0) throw BadParams("make_sigma: d");
  switch (spec.tag) {
    case SigmaSpec::Tag::DiagonalScaled: {
      if (a1_norm2 <= 0.0) throw BadParams("make_sigma: nonpositive norm");
      return scale(DenseMatrix::identity(d), 2.0 * a1_norm2);
    }
    case SigmaSpec::Tag::Toeplitz: {
      if (spec.rho <= 0.0 || spec.rho >= 1.0)
        throw BadParams("make_sigma: rho must lie in (0,1)");
      DenseMatrix sigma(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          sigma(i, j) = std::pow(spec.rho,
                                 static_cast<double>(i > j ? i - j : j - i));
      return sigma;
    }
  }
  throw BadParams("make_sigma: unknown spec");
}

DenseMatrix derive_psi(const DenseMatrix& sigma, const DenseMatrix& a1) {
  if (!sigma.square() || sigma.rows() != a1.rows() || !a1.square())
    throw DimensionMismatch("derive_psi: shape");
  const DenseMatrix product = matmul(transpose(a1), matmul(sigma, a1));
  const DenseMatrix psi = symmetrize_average(sub(sigma, product));
  if (!is_psd_within(psi, tol::kPsdPivot))
    throw NotPsd("derive_psi: sigma - a1' sigma a1 is not PSD");
  return psi;
}

GeneratedModel make_varp_model(const std::vector<DenseMatrix>& patterns,
                               double kappa_per_lag, const DenseMatrix& psi) {
  if (patterns.empty()) throw BadParams("make_varp_model: no patterns");
  std::vector<DenseMatrix> lags;
  lags.reserve(patterns.size());
  for (const auto& pattern : patterns)
    lags.push_back(rescale_spectral(pattern, kappa_per_lag));

  VarModel model(std::move(lags), psi);
  if (!is_stationary(model))
    throw NotStationary("make_varp_model: companion fails the stability check");
  DenseMatrix sigma_tilde = stationary_covariance(model);
  return {std::move(model), std::move(sigma_tilde)};
}

}  // namespace sparsevar
