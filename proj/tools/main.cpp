#include <string>

#include "CLI11.hpp"
#include "sparsevar/cli.hpp"
#include "sparsevar/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Transition-matrix estimation for sparse vector autoregressions"};
  app.require_subcommand(1);

  const unsigned default_workers = sparsevar::default_workers();

  // simulate
  std::string sim_config, sim_out;
  auto* sim = app.add_subcommand("simulate", "Generate a model bundle and series");
  sim->add_option("--config", sim_config, "JSON config")->required();
  sim->add_option("--out", sim_out, "output directory")->required();

  // estimate
  sparsevar::cli::EstimateArgs est;
  est.workers = default_workers;
  double est_lambda = 0.0;
  auto* est_cmd = app.add_subcommand("estimate", "Fit transition matrices to a series");
  est_cmd->add_option("--series", est.series_path, "series CSV")->required();
  est_cmd->add_option("--method", est.method, "direct|lasso|ridge");
  est_cmd->add_option("--p", est.p, "lag order");
  auto* lam_opt = est_cmd->add_option("--lambda", est_lambda, "fixed tuning value");
  est_cmd->add_option("--cv", est.cv_path, "cross-validation spec JSON");
  est_cmd->add_option("--truth", est.truth_dir, "ground-truth bundle directory");
  est_cmd->add_option("--out", est.out_dir, "output directory")->required();
  est_cmd->add_option("--workers", est.workers, "worker threads");

  // preprocess
  std::string pre_series, pre_out;
  std::size_t pre_keep = 0;
  auto* pre = app.add_subcommand("preprocess", "Keep the most variable columns and center them");
  pre->add_option("--series", pre_series, "series CSV")->required();
  pre->add_option("--keep", pre_keep, "columns to keep")->required();
  pre->add_option("--out", pre_out, "output CSV")->required();

  // crossval
  sparsevar::cli::CrossvalArgs cv;
  cv.workers = default_workers;
  std::size_t cv_t0 = 0;
  auto* cv_cmd = app.add_subcommand("crossval", "Rolling one-step-ahead tuning selection");
  cv_cmd->add_option("--series", cv.series_path, "series CSV")->required();
  cv_cmd->add_option("--grid", cv.grid_path, "grid spec JSON")->required();
  cv_cmd->add_option("--n1", cv.n1, "training window length");
  cv_cmd->add_option("--n2", cv.n2, "number of validation targets");
  auto* t0_opt = cv_cmd->add_option("--t0", cv_t0, "anchor time (default: end of series)");
  cv_cmd->add_option("--method", cv.method, "direct|lasso|ridge");
  cv_cmd->add_option("--out", cv.out_path, "result JSON")->required();
  cv_cmd->add_option("--workers", cv.workers, "worker threads");

  // predict
  std::string pred_model, pred_series, pred_out;
  auto* pred = app.add_subcommand("predict", "One-step-ahead forecast from a fitted model");
  pred->add_option("--model", pred_model, "model directory")->required();
  pred->add_option("--series", pred_series, "series CSV")->required();
  pred->add_option("--out", pred_out, "forecast CSV")->required();

  // bench
  std::string bench_config, bench_out;
  unsigned bench_workers = default_workers;
  auto* bench = app.add_subcommand("bench", "Replicated synthetic benchmark");
  bench->add_option("--config", bench_config, "JSON config")->required();
  bench->add_option("--workers", bench_workers, "worker threads");
  bench->add_option("--out", bench_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return sparsevar::cli::cmd_simulate(sim_config, sim_out);
  if (est_cmd->parsed()) {
    if (lam_opt->count()) est.lambda = est_lambda;
    return sparsevar::cli::cmd_estimate(est);
  }
  if (pre->parsed())
    return sparsevar::cli::cmd_preprocess(pre_series, pre_keep, pre_out);
  if (cv_cmd->parsed()) {
    if (t0_opt->count()) cv.t0 = cv_t0;
    return sparsevar::cli::cmd_crossval(cv);
  }
  if (pred->parsed())
    return sparsevar::cli::cmd_predict(pred_model, pred_series, pred_out);
  if (bench->parsed())
    return sparsevar::cli::cmd_bench(bench_config, bench_workers, bench_out);
  return sparsevar::cli::kBadInput;
}
