#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sparsevar/datagen.hpp"
#include "sparsevar/eval.hpp"

namespace sparsevar {

// Rolling-validation settings for tuning-parameter selection. When
// lambda_grid is empty, a per-method grid of `grid_points` log-spaced values
// spanning [span_lo, span_hi] times the method's natural scale is built from
// the series being fitted.
struct CvSpec {
  std::size_t n1 = 0;  // 0: T/2
  std::size_t n2 = 0;  // 0: as large as the windows allow, at most T/2
  std::size_t grid_points = 20;
  double span_lo = 0.01;
  double span_hi = 2.0;
  std::vector<double> lambda_grid;  // explicit absolute grid (all methods)
  std::vector<std::size_t> p_grid;  // empty: the generating order only
};

struct BenchConfig {
  PatternKind pattern;
  std::size_t d = 0;
  std::size_t t_len = 0;
  std::size_t p = 1;
  SigmaSpec sigma{SigmaSpec::Tag::DiagonalScaled, 0.0};  // order-1 models only
  double kappa = 0.5;
  std::size_t replicates = 100;
  std::uint64_t seed = 0;
  std::vector<EstimatorKind> methods;
  std::optional<double> fixed_lambda;  // bypasses cross-validation
  CvSpec cv;
  std::vector<double> sweep_kappas;  // non-empty switches to sweep mode
  unsigned workers = 1;
};

struct BenchRow {
  EstimatorKind method;
  double lf_mean = 0, lf_sd = 0;
  double l2_mean = 0, l2_sd = 0;
  double l1_mean = 0, l1_sd = 0;
  double mean_wall_ms = 0;  // timing sidecar; not part of deterministic output
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;                  // table mode
  std::vector<double> kappas;                  // sweep mode
  std::vector<std::vector<BenchRow>> sweep_rows;  // per kappa, per method
};

// Ground truth plus simulated series for replicate r of a benchmark; the
// replicate stream is seed ^ r so any replicate can be regenerated alone.
struct Replicate {
  VarModel model;
  DenseMatrix truth;  // stacked dp x d
  TimeSeries series;
};

Replicate make_replicate(const BenchConfig& config, double kappa,
                         std::uint64_t rep_index);

// Grid of lambda values matched to the method's own scale on this series.
std::vector<double> default_lambda_grid(const TimeSeries& ts, std::size_t p,
                                        EstimatorKind method,
                                        const CvSpec& spec);

// Selects lambda (cross-validation unless fixed), fits on the full series and
// returns the stacked coefficient block. wall_ms covers the final fit only.
struct FitOutcome {
  bool ok = false;
  DenseMatrix stacked{1, 1};
  double lambda = 0.0;
  std::size_t p = 1;  // fitted order (may differ from the request under CV)
  double wall_ms = 0.0;
  std::size_t infeasible_columns = 0;
};

FitOutcome fit_with_selection(const TimeSeries& ts, std::size_t p,
                              EstimatorKind method, const BenchConfig& config,
                              unsigned workers);

BenchResult run_bench(const BenchConfig& config);

}  // namespace sparsevar
