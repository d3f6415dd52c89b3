#include "sparsevar/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "sparsevar/bench.hpp"
#include "sparsevar/csv.hpp"
#include "sparsevar/estimators.hpp"
#include "sparsevar/linalg.hpp"

namespace sparsevar::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  json j;
  in >> j;
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

PatternKind pattern_from_json(const json& j, std::size_t d) {
  PatternKind kind;
  kind.tag = pattern_from_string(j.at("kind").get<std::string>());
  switch (kind.tag) {
    case PatternTag::Band:
      kind.bandwidth = j.value("bandwidth", std::size_t{2});
      break;
    case PatternTag::Cluster:
      kind.block_size = j.value("block_size", std::max<std::size_t>(1, d / 5));
      break;
    case PatternTag::Hub:
      kind.hub_count = j.value("hub_count", std::max<std::size_t>(1, d / 10));
      break;
    case PatternTag::Random:
      kind.edge_prob = j.value("edge_prob", 3.0 / static_cast<double>(d));
      break;
    case PatternTag::ScaleFree:
      kind.attach_count = j.value("attach_count", std::size_t{2});
      break;
  }
  return kind;
}

json pattern_to_json(const PatternKind& kind) {
  json j{{"kind", to_string(kind.tag)}};
  switch (kind.tag) {
    case PatternTag::Band: j["bandwidth"] = kind.bandwidth; break;
    case PatternTag::Cluster: j["block_size"] = kind.block_size; break;
    case PatternTag::Hub: j["hub_count"] = kind.hub_count; break;
    case PatternTag::Random: j["edge_prob"] = kind.edge_prob; break;
    case PatternTag::ScaleFree: j["attach_count"] = kind.attach_count; break;
  }
  return j;
}

SigmaSpec sigma_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "diagonal_scaled") return {SigmaSpec::Tag::DiagonalScaled, 0.0};
  if (kind == "toeplitz")
    return {SigmaSpec::Tag::Toeplitz, j.at("rho").get<double>()};
  throw BadParams("unknown sigma kind: " + kind);
}

json sigma_to_json(const SigmaSpec& spec) {
  if (spec.tag == SigmaSpec::Tag::DiagonalScaled)
    return json{{"kind", "diagonal_scaled"}};
  return json{{"kind", "toeplitz"}, {"rho", spec.rho}};
}

int classify_error(const Error& err) {
  // NotPsd from model generation means the config admits no valid
  // stationary process, so it shares the non-stationary exit code.
  if (dynamic_cast<const NotStationary*>(&err) ||
      dynamic_cast<const NotPsd*>(&err))
    return kNotStationary;
  if (dynamic_cast<const AllColumnsInfeasible*>(&err) ||
      dynamic_cast<const NoConvergence*>(&err) ||
      dynamic_cast<const NotOptimal*>(&err))
    return kEstimationFailed;
  return kBadInput;
}

int report_error(const char* cmd, const Error& err) {
  std::cerr << cmd << ": " << err.what() << '\n';
  return classify_error(err);
}

// Builds the generating model of a simulate/bench style config.
struct ModelSpec {
  PatternKind pattern;
  std::size_t d, t_len, p;
  SigmaSpec sigma;
  double kappa;
  std::uint64_t seed;
};

ModelSpec model_spec_from_json(const json& j) {
  ModelSpec spec{};
  spec.d = j.at("d").get<std::size_t>();
  spec.t_len = j.at("t_len").get<std::size_t>();
  spec.p = j.value("p", std::size_t{1});
  spec.kappa = j.value("kappa", 0.5);
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.pattern = pattern_from_json(j.at("pattern"), spec.d);
  if (spec.p == 1) {
    spec.sigma = j.contains("sigma")
                     ? sigma_from_json(j.at("sigma"))
                     : SigmaSpec{SigmaSpec::Tag::DiagonalScaled, 0.0};
  } else if (j.contains("sigma")) {
    throw BadParams("sigma applies to order-1 configs only (higher orders use identity noise)");
  }
  return spec;
}

}  // namespace

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  try {
    const json config = load_json(config_path);
    const ModelSpec spec = model_spec_from_json(config);

    BenchConfig gen;
    gen.pattern = spec.pattern;
    gen.d = spec.d;
    gen.t_len = spec.t_len;
    gen.p = spec.p;
    gen.sigma = spec.sigma;
    gen.seed = spec.seed;
    const Replicate replicate = make_replicate(gen, spec.kappa, 0);

    fs::create_directories(out_dir);
    std::vector<std::string> paths;
    for (std::size_t k = 0; k < spec.p; ++k) {
      const std::string path =
          (fs::path(out_dir) / ("A_" + std::to_string(k + 1) + ".csv")).string();
      write_matrix_csv(replicate.model.transitions[k], path);
      paths.push_back(path);
    }
    const std::string psi_path = (fs::path(out_dir) / "psi.csv").string();
    write_matrix_csv(replicate.model.noise_cov, psi_path);
    paths.push_back(psi_path);

    const std::string series_path = (fs::path(out_dir) / "series.csv").string();
    write_series_csv(replicate.series, series_path);
    paths.push_back(series_path);

    json meta{{"spec_version", kSpecVersion},
              {"d", spec.d},
              {"p", spec.p},
              {"t_len", spec.t_len},
              {"kappa", spec.kappa},
              {"seed", spec.seed},
              {"pattern", pattern_to_json(spec.pattern)}};
    if (spec.p == 1) meta["sigma"] = sigma_to_json(spec.sigma);
    const std::string meta_path = (fs::path(out_dir) / "meta.json").string();
    write_json(meta, meta_path);
    paths.push_back(meta_path);

    for (const auto& path : paths) std::cout << path << '\n';
    return kOk;
  } catch (const json::exception& err) {
    std::cerr << "simulate: bad config: " << err.what() << '\n';
    return kBadInput;
  } catch (const Error& err) {
    return report_error("simulate", err);
  }
}

namespace {

// Ground-truth lag matrices from a model bundle directory.
std::vector<DenseMatrix> load_bundle_lags(const std::string& dir) {
  std::vector<DenseMatrix> lags;
  for (std::size_t k = 1;; ++k) {
    fs::path path = fs::path(dir) / ("A_" + std::to_string(k) + ".csv");
    if (!fs::exists(path))
      path = fs::path(dir) / ("A_hat_" + std::to_string(k) + ".csv");
    if (!fs::exists(path)) break;
    lags.push_back(read_matrix_csv(path.string()));
  }
  if (lags.empty())
    throw IoError("no transition matrices found under " + dir);
  return lags;
}

json cv_result_to_json(const CvResult& cv, EstimatorKind method,
                       std::size_t t0) {
  json grid = json::array();
  json mean_err = json::array();
  for (std::size_t g = 0; g < cv.grid.size(); ++g) {
    grid.push_back({{"p", cv.grid[g].p}, {"lambda", cv.grid[g].lambda}});
    if (cv.skipped[g]) mean_err.push_back(nullptr);
    else mean_err.push_back(cv.mean_err[g]);
  }
  return json{{"spec_version", kSpecVersion},
              {"method", to_string(method)},
              {"n1", cv.n1},
              {"n2", cv.n2},
              {"t0", t0},
              {"grid", grid},
              {"mean_err", mean_err},
              {"skipped", cv.skipped},
              {"infeasible_columns", cv.infeasible_columns},
              {"best", {{"p", cv.best.p}, {"lambda", cv.best.lambda}}}};
}

struct CvPlan {
  std::vector<GridPoint> grid;
  std::size_t n1;
  std::size_t n2;
  std::size_t t0;
};

// Grid and window sizes from a crossval spec file. Grids may be given as
// explicit (p, lambda) pairs, as p_grid x lambda_grid, or left to the
// per-method default via grid_points/span.
CvPlan cv_plan_from_json(const json& j, const TimeSeries& ts,
                         EstimatorKind method, std::size_t default_p) {
  CvPlan plan;
  std::vector<std::size_t> p_grid;
  if (j.contains("p_grid"))
    p_grid = j.at("p_grid").get<std::vector<std::size_t>>();
  else
    p_grid.push_back(default_p);

  CvSpec spec;
  spec.grid_points = j.value("grid_points", std::size_t{20});
  if (j.contains("span")) {
    const auto span = j.at("span").get<std::vector<double>>();
    if (span.size() != 2) throw BadParams("cv span must have two entries");
    spec.span_lo = span[0];
    spec.span_hi = span[1];
  }

  if (j.contains("pairs")) {
    for (const auto& pair : j.at("pairs")) {
      if (!pair.is_array() || pair.size() != 2)
        throw BadParams("cv pairs must be [p, lambda] arrays");
      plan.grid.push_back({pair[0].get<std::size_t>(), pair[1].get<double>()});
    }
  } else if (j.contains("lambda_grid")) {
    const auto lambdas = j.at("lambda_grid").get<std::vector<double>>();
    for (std::size_t p : p_grid)
      for (double l : lambdas) plan.grid.push_back({p, l});
  } else {
    for (std::size_t p : p_grid) {
      const std::vector<double> lambdas =
          default_lambda_grid(ts, p, method, spec);
      for (double l : lambdas) plan.grid.push_back({p, l});
    }
  }
  if (plan.grid.empty()) throw BadParams("cv grid is empty");

  std::size_t max_p = 0;
  for (const auto& g : plan.grid) max_p = std::max(max_p, g.p);
  plan.t0 = j.value("t0", ts.t_len + 1);
  plan.n1 = j.value("n1", ts.t_len / 2);
  const std::size_t cap =
      plan.t0 >= plan.n1 + max_p + 1 ? plan.t0 - plan.n1 - max_p - 1 : 0;
  plan.n2 = j.value("n2", std::min(ts.t_len / 2, cap));
  return plan;
}

}  // namespace

int cmd_estimate(const EstimateArgs& args) {
  try {
    const TimeSeries series = read_series_csv(args.series_path);
    const EstimatorKind method = estimator_from_string(args.method);

    std::size_t p = args.p;
    double lambda;
    json cv_json = nullptr;
    if (args.lambda) {
      lambda = *args.lambda;
    } else if (!args.cv_path.empty()) {
      const json spec = load_json(args.cv_path);
      const CvPlan plan = cv_plan_from_json(spec, series, method, args.p);
      const CvResult cv = cross_validate(series, plan.grid, plan.n1, plan.n2,
                                         plan.t0, method, args.workers);
      lambda = cv.best.lambda;
      p = cv.best.p;
      cv_json = cv_result_to_json(cv, method, plan.t0);
    } else {
      throw BadParams("estimate: provide either a fixed lambda or a cv spec");
    }

    std::vector<DenseMatrix> lags;
    json statuses = json::array();
    const auto start = std::chrono::steady_clock::now();
    switch (method) {
      case EstimatorKind::Direct: {
        DirectEstimate est = estimate_direct(series, p, lambda, args.workers);
        for (LpStatus s : est.per_column_status)
          statuses.push_back(to_string(s));
        lags = std::move(est.lags);
        break;
      }
      case EstimatorKind::Lasso: {
        LassoEstimate est = estimate_lasso(series, p, lambda, args.workers);
        for (std::size_t j = 0; j < series.dim; ++j)
          statuses.push_back(est.converged ? "converged" : "max_sweeps");
        lags = std::move(est.lags);
        break;
      }
      case EstimatorKind::Ridge: {
        lags = estimate_ridge(series, p, lambda);
        for (std::size_t j = 0; j < series.dim; ++j)
          statuses.push_back("solved");
        break;
      }
    }
    const auto stop = std::chrono::steady_clock::now();
    const double wall_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();

    fs::create_directories(args.out_dir);
    json files = json::array();
    for (std::size_t k = 0; k < lags.size(); ++k) {
      const std::string path =
          (fs::path(args.out_dir) / ("A_hat_" + std::to_string(k + 1) + ".csv"))
              .string();
      write_matrix_csv(lags[k], path);
      files.push_back(path);
    }

    json error = nullptr;
    if (!args.truth_dir.empty()) {
      const std::vector<DenseMatrix> truth = load_bundle_lags(args.truth_dir);
      if (truth.size() != lags.size())
        throw BadParams("estimate: truth bundle lag count differs from fit");
      const ErrorReport report =
          error_norms(stack_lags(lags), stack_lags(truth));
      error = json{{"frobenius", report.frobenius},
                   {"spectral", report.spectral},
                   {"induced_l1", report.induced_l1},
                   {"element_max", report.element_max}};
    }

    const json report{{"spec_version", kSpecVersion},
                      {"method", to_string(method)},
                      {"p", p},
                      {"lambda", lambda},
                      {"cv", cv_json},
                      {"per_column_status", statuses},
                      {"wall_ms", wall_ms},
                      {"error", error},
                      {"files", files}};
    write_json(report, (fs::path(args.out_dir) / "report.json").string());
    return kOk;
  } catch (const json::exception& err) {
    std::cerr << "estimate: bad input: " << err.what() << '\n';
    return kBadInput;
  } catch (const Error& err) {
    return report_error("estimate", err);
  }
}

int cmd_preprocess(const std::string& series_path, std::size_t keep,
                   const std::string& out_path) {
  try {
    const TimeSeries series = read_series_csv(series_path);
    if (keep == 0 || keep > series.dim) {
      std::cerr << "preprocess: keep must lie in [1, " << series.dim << "]\n";
      return kBadInput;
    }
    const std::size_t t = series.t_len;

    std::vector<double> mean(series.dim, 0.0), sd(series.dim, 0.0);
    for (std::size_t j = 0; j < series.dim; ++j) {
      for (std::size_t i = 0; i < t; ++i) mean[j] += series(i, j);
      mean[j] /= static_cast<double>(t);
      double ss = 0.0;
      for (std::size_t i = 0; i < t; ++i) {
        const double dev = series(i, j) - mean[j];
        ss += dev * dev;
      }
      sd[j] = t > 1 ? std::sqrt(ss / static_cast<double>(t - 1)) : 0.0;
    }

    std::vector<std::size_t> order(series.dim);
    for (std::size_t j = 0; j < series.dim; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       if (sd[a] != sd[b]) return sd[a] > sd[b];
                       return a < b;  // ties: lower column index wins
                     });
    std::vector<std::size_t> kept(order.begin(), order.begin() + keep);
    std::sort(kept.begin(), kept.end());

    TimeSeries out(t, keep);
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < keep; ++j)
        out(i, j) = series(i, kept[j]) - mean[kept[j]];
    write_series_csv(out, out_path);

    json kept_means = json::array();
    for (std::size_t j : kept) kept_means.push_back(mean[j]);
    const json manifest{{"spec_version", kSpecVersion},
                        {"kept_columns", kept},
                        {"column_means", kept_means}};
    write_json(manifest, out_path + ".manifest.json");
    return kOk;
  } catch (const Error& err) {
    return report_error("preprocess", err);
  }
}

int cmd_crossval(const CrossvalArgs& args) {
  try {
    const TimeSeries series = read_series_csv(args.series_path);
    const EstimatorKind method = estimator_from_string(args.method);
    json spec = load_json(args.grid_path);
    if (args.n1) spec["n1"] = args.n1;
    if (args.n2) spec["n2"] = args.n2;
    if (args.t0) spec["t0"] = *args.t0;
    const CvPlan plan = cv_plan_from_json(spec, series, method, 1);
    const CvResult cv = cross_validate(series, plan.grid, plan.n1, plan.n2,
                                       plan.t0, method, args.workers);
    write_json(cv_result_to_json(cv, method, plan.t0), args.out_path);
    return kOk;
  } catch (const json::exception& err) {
    std::cerr << "crossval: bad input: " << err.what() << '\n';
    return kBadInput;
  } catch (const Error& err) {
    return report_error("crossval", err);
  }
}

int cmd_predict(const std::string& model_dir, const std::string& series_path,
                const std::string& out_path) {
  try {
    const std::vector<DenseMatrix> lags = load_bundle_lags(model_dir);
    const TimeSeries series = read_series_csv(series_path);
    const std::size_t p = lags.size();
    const std::size_t d = lags.front().rows();
    if (series.dim != d) {
      std::cerr << "predict: series dimension " << series.dim
                << " does not match model dimension " << d << '\n';
      return kBadInput;
    }
    if (series.t_len < p) {
      std::cerr << "predict: series shorter than the model order\n";
      return kBadInput;
    }
    std::vector<std::vector<double>> history(p, std::vector<double>(d));
    for (std::size_t k = 0; k < p; ++k) {
      const double* row = series.row(series.t_len - p + k);
      std::copy(row, row + d, history[k].begin());
    }
    const std::vector<double> forecast = predict_next(lags, history);
    DenseMatrix out(1, d);
    for (std::size_t j = 0; j < d; ++j) out(0, j) = forecast[j];
    write_matrix_csv(out, out_path);
    return kOk;
  } catch (const Error& err) {
    return report_error("predict", err);
  }
}

namespace {

json bench_row_to_json(const BenchRow& row) {
  return json{{"method", to_string(row.method)},
              {"lf_mean", row.lf_mean},   {"lf_sd", row.lf_sd},
              {"l2_mean", row.l2_mean},   {"l2_sd", row.l2_sd},
              {"l1_mean", row.l1_mean},   {"l1_sd", row.l1_sd},
              {"n_ok", row.n_ok},         {"n_failed", row.n_failed}};
}

std::string bench_row_csv(const BenchRow& row) {
  std::string line = to_string(row.method);
  for (double v : {row.lf_mean, row.lf_sd, row.l2_mean, row.l2_sd, row.l1_mean,
                   row.l1_sd})
    line += "," + format_double(v);
  line += "," + std::to_string(row.n_ok) + "," + std::to_string(row.n_failed);
  return line;
}

}  // namespace

int cmd_bench(const std::string& config_path, unsigned workers,
              const std::string& out_dir) {
  try {
    const json config_json = load_json(config_path);
    BenchConfig config;
    const ModelSpec spec = model_spec_from_json(config_json);
    config.pattern = spec.pattern;
    config.d = spec.d;
    config.t_len = spec.t_len;
    config.p = spec.p;
    config.sigma = spec.sigma;
    config.kappa = spec.kappa;
    config.seed = spec.seed;
    config.replicates = config_json.value("replicates", std::size_t{100});
    config.workers = workers ? workers : 1;

    const auto method_names = config_json.value(
        "methods", std::vector<std::string>{"direct", "lasso", "ridge"});
    for (const auto& name : method_names)
      config.methods.push_back(estimator_from_string(name));

    if (config_json.contains("lambda")) {
      config.fixed_lambda = config_json.at("lambda").get<double>();
    }
    if (config_json.contains("cv")) {
      const json& cv = config_json.at("cv");
      config.cv.n1 = cv.value("n1", std::size_t{0});
      config.cv.n2 = cv.value("n2", std::size_t{0});
      config.cv.grid_points = cv.value("grid_points", std::size_t{20});
      if (cv.contains("span")) {
        const auto span = cv.at("span").get<std::vector<double>>();
        if (span.size() != 2) throw BadParams("bench: cv span needs two entries");
        config.cv.span_lo = span[0];
        config.cv.span_hi = span[1];
      }
      if (cv.contains("lambda_grid"))
        config.cv.lambda_grid = cv.at("lambda_grid").get<std::vector<double>>();
      if (cv.contains("p_grid"))
        config.cv.p_grid = cv.at("p_grid").get<std::vector<std::size_t>>();
    }
    if (config_json.contains("sweep_kappas"))
      config.sweep_kappas =
          config_json.at("sweep_kappas").get<std::vector<double>>();

    const BenchResult result = run_bench(config);

    fs::create_directories(out_dir);
    json out_json{{"spec_version", kSpecVersion},
                  {"config", config_json},
                  {"replicates", config.replicates}};
    std::string table = "method,lf_mean,lf_sd,l2_mean,l2_sd,l1_mean,l1_sd,n_ok,n_failed\n";
    std::string timing = "method,kappa,mean_wall_ms\n";

    if (config.sweep_kappas.empty()) {
      json rows = json::array();
      for (const BenchRow& row : result.rows) {
        rows.push_back(bench_row_to_json(row));
        table += bench_row_csv(row) + "\n";
        timing += std::string(to_string(row.method)) + "," +
                  format_double(config.kappa) + "," +
                  format_double(row.mean_wall_ms) + "\n";
      }
      out_json["rows"] = rows;
    } else {
      table = "kappa," + table;
      json sweeps = json::array();
      for (std::size_t ki = 0; ki < result.kappas.size(); ++ki) {
        json rows = json::array();
        for (const BenchRow& row : result.sweep_rows[ki]) {
          rows.push_back(bench_row_to_json(row));
          table += format_double(result.kappas[ki]) + "," +
                   bench_row_csv(row) + "\n";
          timing += std::string(to_string(row.method)) + "," +
                    format_double(result.kappas[ki]) + "," +
                    format_double(row.mean_wall_ms) + "\n";
        }
        sweeps.push_back(json{{"kappa", result.kappas[ki]}, {"rows", rows}});
      }
      out_json["sweep"] = sweeps;
    }

    {
      std::ofstream out(fs::path(out_dir) / "table.csv");
      if (!out) throw IoError("cannot write table.csv");
      out << table;
    }
    {
      // Wall times are machine- and load-dependent; they live in a sidecar so
      // the table and JSON stay reproducible byte for byte.
      std::ofstream out(fs::path(out_dir) / "timing.csv");
      if (!out) throw IoError("cannot write timing.csv");
      out << timing;
    }
    write_json(out_json, (fs::path(out_dir) / "bench.json").string());
    return kOk;
  } catch (const json::exception& err) {
    std::cerr << "bench: bad config: " << err.what() << '\n';
    return kBadInput;
  } catch (const Error& err) {
    return report_error("bench", err);
  }
}

}  // namespace sparsevar::cli
