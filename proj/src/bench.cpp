#include "sparsevar/bench.hpp"

#include <chrono>
#include <cmath>

#include "sparsevar/covest.hpp"
#include "sparsevar/estimators.hpp"
#include "sparsevar/linalg.hpp"
#include "sparsevar/parallel.hpp"
#include "sparsevar/rng.hpp"

namespace sparsevar {

Replicate make_replicate(const BenchConfig& config, double kappa,
                         std::uint64_t rep_index) {
  const std::uint64_t rep_seed = config.seed ^ rep_index;
  const std::uint64_t pattern_seed = CounterRng::substream(rep_seed, 1);
  const std::uint64_t sim_seed = CounterRng::substream(rep_seed, 2);

  std::vector<DenseMatrix> patterns;
  patterns.reserve(config.p);
  for (std::size_t k = 0; k < config.p; ++k)
    patterns.push_back(gen_pattern(config.pattern, config.d,
                                   CounterRng::substream(pattern_seed, k)));

  if (config.p == 1) {
    const DenseMatrix a1 = rescale_spectral(patterns[0], kappa);
    const DenseMatrix sigma = make_sigma(config.sigma, config.d, kappa);
    const DenseMatrix psi = derive_psi(sigma, a1);
    VarModel model({a1}, psi);
    if (!is_stationary(model))
      throw NotStationary("bench replicate: generated model not stationary");
    DenseMatrix truth = stack_lags(model.transitions);
    TimeSeries series = simulate(model, config.t_len, sim_seed);
    return {std::move(model), std::move(truth), std::move(series)};
  }

  // Multi-lag setting: identity noise, every lag rescaled to kappa.
  GeneratedModel gen =
      make_varp_model(patterns, kappa, DenseMatrix::identity(config.d));
  DenseMatrix truth = stack_lags(gen.model.transitions);
  TimeSeries series = simulate(gen.model, config.t_len, sim_seed);
  return {std::move(gen.model), std::move(truth), std::move(series)};
}

std::vector<double> default_lambda_grid(const TimeSeries& ts, std::size_t p,
                                        EstimatorKind method,
                                        const CvSpec& spec) {
  if (!spec.lambda_grid.empty()) return spec.lambda_grid;
  if (spec.grid_points == 0) throw BadParams("lambda grid: no points");

  double scale = 0.0;
  switch (method) {
    case EstimatorKind::Direct: {
      scale = max_abs(sample_covariances(ts, p).s1);
      break;
    }
    case EstimatorKind::Lasso: {
      // Kill threshold 2 * max |X Y^T|, assembled without forming the blocks.
      const std::size_t d = ts.dim;
      const std::size_t n = ts.t_len - p;
      DenseMatrix corr(d * p, d);
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t k = 0; k < p; ++k) {
          const double* past = ts.row(p + t - 1 - k);
          const double* target = ts.row(p + t);
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
              corr(k * d + i, j) += past[i] * target[j];
        }
      scale = 2.0 * max_abs(corr);
      break;
    }
    case EstimatorKind::Ridge: {
      double trace = 0.0;
      const std::size_t n = ts.t_len - p;
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t k = 0; k < p; ++k) {
          const double* past = ts.row(p + t - 1 - k);
          for (std::size_t j = 0; j < ts.dim; ++j) trace += past[j] * past[j];
        }
      scale = trace / static_cast<double>(ts.dim * p);
      break;
    }
  }
  if (scale <= 0.0) scale = 1.0;

  const double lo = spec.span_lo * scale;
  const double hi = spec.span_hi * scale;
  std::vector<double> grid(spec.grid_points);
  if (spec.grid_points == 1) {
    grid[0] = hi;
    return grid;
  }
  const double ratio = std::log(hi / lo) / static_cast<double>(spec.grid_points - 1);
  for (std::size_t i = 0; i < spec.grid_points; ++i)
    grid[i] = lo * std::exp(ratio * static_cast<double>(i));
  return grid;
}

FitOutcome fit_with_selection(const TimeSeries& ts, std::size_t p,
                              EstimatorKind method, const BenchConfig& config,
                              unsigned workers) {
  FitOutcome out;
  double lambda;
  std::size_t fit_p = p;
  if (config.fixed_lambda) {
    lambda = *config.fixed_lambda;
  } else {
    const std::vector<std::size_t> orders =
        config.cv.p_grid.empty() ? std::vector<std::size_t>{p}
                                 : config.cv.p_grid;
    std::vector<GridPoint> grid;
    std::size_t max_p = 0;
    for (std::size_t order : orders) {
      max_p = std::max(max_p, order);
      for (double l : default_lambda_grid(ts, order, method, config.cv))
        grid.push_back({order, l});
    }

    std::size_t n1 = config.cv.n1 ? config.cv.n1 : ts.t_len / 2;
    const std::size_t t0 = ts.t_len + 1;
    std::size_t n2_cap = (t0 >= n1 + max_p + 1) ? t0 - n1 - max_p - 1 : 0;
    std::size_t n2 = config.cv.n2 ? config.cv.n2
                                  : std::min(ts.t_len / 2, n2_cap);
    if (n2 == 0) throw WindowTooLarge("fit_with_selection: no room for validation");
    const CvResult cv = cross_validate(ts, grid, n1, n2, t0, method, workers);
    lambda = cv.best.lambda;
    fit_p = cv.best.p;
  }

  const auto start = std::chrono::steady_clock::now();
  switch (method) {
    case EstimatorKind::Direct: {
      DirectEstimate est = estimate_direct(ts, fit_p, lambda, workers);
      out.infeasible_columns = est.infeasible_columns();
      out.stacked = std::move(est.omega_hat);
      break;
    }
    case EstimatorKind::Lasso:
      out.stacked = stack_lags(estimate_lasso(ts, fit_p, lambda, workers).lags);
      break;
    case EstimatorKind::Ridge:
      out.stacked = stack_lags(estimate_ridge(ts, fit_p, lambda));
      break;
  }
  const auto stop = std::chrono::steady_clock::now();
  out.wall_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  out.lambda = lambda;
  out.p = fit_p;
  out.ok = true;
  return out;
}

namespace {

struct ReplicateOutcome {
  // per method: ok flag, error norms, wall ms
  std::vector<bool> ok;
  std::vector<ErrorReport> errors;
  std::vector<double> wall_ms;
};

ReplicateOutcome run_replicate(const BenchConfig& config, double kappa,
                               std::size_t rep) {
  ReplicateOutcome out;
  const std::size_t nm = config.methods.size();
  out.ok.assign(nm, false);
  out.errors.assign(nm, ErrorReport{});
  out.wall_ms.assign(nm, 0.0);

  std::optional<Replicate> replicate_storage;
  try {
    replicate_storage = make_replicate(config, kappa, rep);
  } catch (const Error&) {
    return out;  // generation failed; every method counts as failed
  }
  Replicate& replicate = *replicate_storage;
  for (std::size_t mi = 0; mi < nm; ++mi) {
    try {
      const FitOutcome fit = fit_with_selection(
          replicate.series, config.p, config.methods[mi], config, 1);
      // a CV-selected order below the generating one reads as zero lags
      const std::size_t rows =
          std::max(fit.stacked.rows(), replicate.truth.rows());
      DenseMatrix est(rows, config.d), truth(rows, config.d);
      for (std::size_t i = 0; i < fit.stacked.rows(); ++i)
        for (std::size_t j = 0; j < config.d; ++j) est(i, j) = fit.stacked(i, j);
      for (std::size_t i = 0; i < replicate.truth.rows(); ++i)
        for (std::size_t j = 0; j < config.d; ++j)
          truth(i, j) = replicate.truth(i, j);
      out.errors[mi] = error_norms(est, truth);
      out.wall_ms[mi] = fit.wall_ms;
      out.ok[mi] = true;
    } catch (const Error&) {
      // recorded as a failed fit; the replicate is excluded from this
      // method's averages
    }
  }
  return out;
}

std::vector<BenchRow> aggregate(const BenchConfig& config,
                                const std::vector<ReplicateOutcome>& outcomes) {
  std::vector<BenchRow> rows;
  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    BenchRow row;
    row.method = config.methods[mi];
    std::vector<double> lf, l2, l1;
    double wall = 0.0;
    for (const auto& o : outcomes) {
      if (!o.ok[mi]) { ++row.n_failed; continue; }
      ++row.n_ok;
      lf.push_back(o.errors[mi].frobenius);
      l2.push_back(o.errors[mi].spectral);
      l1.push_back(o.errors[mi].induced_l1);
      wall += o.wall_ms[mi];
    }
    auto mean_sd = [](const std::vector<double>& v, double* mean, double* sd) {
      *mean = 0.0;
      *sd = 0.0;
      if (v.empty()) return;
      for (double x : v) *mean += x;
      *mean /= static_cast<double>(v.size());
      if (v.size() < 2) return;
      double ss = 0.0;
      for (double x : v) ss += (x - *mean) * (x - *mean);
      *sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    };
    mean_sd(lf, &row.lf_mean, &row.lf_sd);
    mean_sd(l2, &row.l2_mean, &row.l2_sd);
    mean_sd(l1, &row.l1_mean, &row.l1_sd);
    row.mean_wall_ms = row.n_ok ? wall / static_cast<double>(row.n_ok) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

BenchResult run_bench(const BenchConfig& config) {
  if (config.replicates == 0) throw BadParams("bench: replicates");
  if (config.methods.empty()) throw BadParams("bench: no methods");
  if (config.d < 2 || config.t_len < config.p + 1)
    throw BadParams("bench: dimensions");

  BenchResult result;
  if (config.sweep_kappas.empty()) {
    std::vector<ReplicateOutcome> outcomes(config.replicates);
    parallel_for(config.replicates, config.workers, [&](std::size_t r) {
      outcomes[r] = run_replicate(config, config.kappa, r);
    });
    result.rows = aggregate(config, outcomes);
    return result;
  }

  result.kappas = config.sweep_kappas;
  result.sweep_rows.resize(config.sweep_kappas.size());
  const std::size_t total = config.sweep_kappas.size() * config.replicates;
  std::vector<ReplicateOutcome> outcomes(total);
  parallel_for(total, config.workers, [&](std::size_t idx) {
    const std::size_t ki = idx / config.replicates;
    outcomes[idx] = run_replicate(config, config.sweep_kappas[ki], idx);
  });
  for (std::size_t ki = 0; ki < config.sweep_kappas.size(); ++ki) {
    const std::vector<ReplicateOutcome> slice(
        outcomes.begin() + ki * config.replicates,
        outcomes.begin() + (ki + 1) * config.replicates);
    result.sweep_rows[ki] = aggregate(config, slice);
  }
  return result;
}

}  // namespace sparsevar
