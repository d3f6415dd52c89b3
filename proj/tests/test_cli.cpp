#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "json.hpp"
#include "sparsevar/cli.hpp"
#include "sparsevar/csv.hpp"
#include "sparsevar/eval.hpp"
#include "sparsevar/linalg.hpp"
#include "test_support.hpp"

using namespace sparsevar;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sparsevar_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

std::set<std::string> key_set(const json& j) {
  std::set<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.insert(it.key());
  return keys;
}

const char* kSimulateConfig = R"({
  "pattern": {"kind": "band", "bandwidth": 1},
  "d": 10, "t_len": 2000, "p": 1,
  "sigma": {"kind": "diagonal_scaled"},
  "kappa": 0.5, "seed": 42
})";

}  // namespace

TEST_CASE("matrix csv round-trips bit-exactly") {
  const fs::path dir = fresh_dir("csv");
  const CounterRng rng(101);
  std::uint64_t draw = 0;
  for (int rep = 0; rep < 5; ++rep) {
    DenseMatrix m = testsup::random_matrix(rng, draw, 4, 3, 1e3);
    m(0, 0) = 1e-300;
    m(1, 1) = -0.0;
    m(2, 2) = 3.141592653589793e200;
    const std::string path = (dir / "m.csv").string();
    write_matrix_csv(m, path);
    CHECK(read_matrix_csv(path) == m);
  }
}

TEST_CASE("series csv skips a single header line") {
  const fs::path dir = fresh_dir("csv_header");
  write_text(dir / "s.csv", "alpha,beta\n1.5,2\n3,4\n");
  const TimeSeries ts = read_series_csv((dir / "s.csv").string());
  CHECK(ts.t_len == 2);
  CHECK(ts.dim == 2);
  CHECK(ts(0, 0) == 1.5);

  write_text(dir / "bad.csv", "a,b\nc,d\n1,2\n");
  CHECK_THROWS_AS(read_series_csv((dir / "bad.csv").string()), IoError);
  write_text(dir / "ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_series_csv((dir / "ragged.csv").string()), IoError);
  CHECK_THROWS_AS(read_series_csv((dir / "missing.csv").string()), IoError);
}

TEST_CASE("simulate writes a complete deterministic bundle") {
  const fs::path dir = fresh_dir("simulate");
  write_text(dir / "config.json", kSimulateConfig);

  REQUIRE(cli::cmd_simulate((dir / "config.json").string(),
                            (dir / "out").string()) == cli::kOk);
  CHECK(fs::exists(dir / "out" / "A_1.csv"));
  CHECK(fs::exists(dir / "out" / "psi.csv"));
  CHECK(fs::exists(dir / "out" / "meta.json"));
  const TimeSeries series =
      read_series_csv((dir / "out" / "series.csv").string());
  CHECK(series.t_len == 2000);
  CHECK(series.dim == 10);

  REQUIRE(cli::cmd_simulate((dir / "config.json").string(),
                            (dir / "out2").string()) == cli::kOk);
  CHECK(read_text(dir / "out" / "series.csv") ==
        read_text(dir / "out2" / "series.csv"));
  CHECK(read_text(dir / "out" / "A_1.csv") ==
        read_text(dir / "out2" / "A_1.csv"));

  const json meta = read_json(dir / "out" / "meta.json");
  CHECK(meta.at("spec_version") == "1.0");
  CHECK(meta.at("d") == 10);
}

TEST_CASE("simulate exit codes") {
  const fs::path dir = fresh_dir("simulate_err");
  CHECK(cli::cmd_simulate((dir / "nope.json").string(),
                          (dir / "out").string()) == cli::kBadInput);

  write_text(dir / "broken.json", "{\"pattern\": ");
  CHECK(cli::cmd_simulate((dir / "broken.json").string(),
                          (dir / "out").string()) == cli::kBadInput);

  write_text(dir / "explosive.json", R"({
    "pattern": {"kind": "band", "bandwidth": 1},
    "d": 6, "t_len": 50, "p": 1,
    "sigma": {"kind": "diagonal_scaled"},
    "kappa": 1.5, "seed": 1
  })");
  CHECK(cli::cmd_simulate((dir / "explosive.json").string(),
                          (dir / "out").string()) == cli::kNotStationary);
}

TEST_CASE("simulate then estimate recovers the transition matrix") {
  const fs::path dir = fresh_dir("roundtrip");
  write_text(dir / "config.json", kSimulateConfig);
  REQUIRE(cli::cmd_simulate((dir / "config.json").string(),
                            (dir / "model").string()) == cli::kOk);

  cli::EstimateArgs args;
  args.series_path = (dir / "model" / "series.csv").string();
  args.method = "direct";
  args.p = 1;
  args.lambda = 0.08;
  args.truth_dir = (dir / "model").string();
  args.out_dir = (dir / "fit").string();
  args.workers = 2;
  REQUIRE(cli::cmd_estimate(args) == cli::kOk);

  const json report = read_json(dir / "fit" / "report.json");
  CHECK(report.at("error").at("element_max").get<double>() < 0.2);

  // compositional check: the reported norms equal error_norms on the files
  const DenseMatrix a_hat =
      read_matrix_csv((dir / "fit" / "A_hat_1.csv").string());
  const DenseMatrix a_true =
      read_matrix_csv((dir / "model" / "A_1.csv").string());
  const ErrorReport expect = error_norms(a_hat, a_true);
  CHECK(report.at("error").at("induced_l1").get<double>() ==
        doctest::Approx(expect.induced_l1).epsilon(1e-12));
}

TEST_CASE("estimate with a dominating threshold writes zero matrices") {
  const fs::path dir = fresh_dir("estimate_zero");
  write_text(dir / "config.json", kSimulateConfig);
  REQUIRE(cli::cmd_simulate((dir / "config.json").string(),
                            (dir / "model").string()) == cli::kOk);

  cli::EstimateArgs args;
  args.series_path = (dir / "model" / "series.csv").string();
  args.lambda = 1e6;
  args.out_dir = (dir / "fit").string();
  REQUIRE(cli::cmd_estimate(args) == cli::kOk);
  CHECK(max_abs(read_matrix_csv((dir / "fit" / "A_hat_1.csv").string())) == 0.0);
}

TEST_CASE("estimate reports share one schema across methods") {
  const fs::path dir = fresh_dir("schema");
  write_text(dir / "config.json", kSimulateConfig);
  REQUIRE(cli::cmd_simulate((dir / "config.json").string(),
                            (dir / "model").string()) == cli::kOk);

  const std::set<std::string> golden{
      "cv", "error", "files", "lambda", "method", "p",
      "per_column_status", "spec_version", "wall_ms"};
  for (const std::string method : {"direct", "lasso", "ridge"}) {
    cli::EstimateArgs args;
    args.series_path = (dir / "model" / "series.csv").string();
    args.method = method;
    args.lambda = method == "ridge" ? 1.0 : 0.2;
    args.out_dir = (dir / ("fit_" + method)).string();
    REQUIRE(cli::cmd_estimate(args) == cli::kOk);
    const json report = read_json(dir / ("fit_" + method) / "report.json");
    CHECK(key_set(report) == golden);
    CHECK(report.at("method") == method);
  }
}

TEST_CASE("estimate requires a tuning choice and a readable series") {
  const fs::path dir = fresh_dir("estimate_err");
  cli::EstimateArgs args;
  args.series_path = (dir / "missing.csv").string();
  args.lambda = 0.1;
  args.out_dir = (dir / "out").string();
  CHECK(cli::cmd_estimate(args) == cli::kBadInput);

  write_text(dir / "s.csv", "1,2\n3,4\n5,6\n");
  args.series_path = (dir / "s.csv").string();
  args.lambda.reset();
  CHECK(cli::cmd_estimate(args) == cli::kBadInput);
}

TEST_CASE("preprocess keeps the most variable columns and centers them") {
  const fs::path dir = fresh_dir("preprocess");
  // column 0: zero-mean +-2 swings; column 1: constant; column 2: +-1 swings
  write_text(dir / "s.csv", "2,7,1\n-2,7,-1\n2,7,1\n-2,7,-1\n");

  REQUIRE(cli::cmd_preprocess((dir / "s.csv").string(), 2,
                              (dir / "kept.csv").string()) == cli::kOk);
  const TimeSeries kept = read_series_csv((dir / "kept.csv").string());
  CHECK(kept.dim == 2);
  const json manifest = read_json(dir / "kept.csv.manifest.json");
  CHECK(manifest.at("kept_columns") == json::array({0, 2}));

  for (std::size_t j = 0; j < kept.dim; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < kept.t_len; ++i) mean += kept(i, j);
    CHECK(std::abs(mean / static_cast<double>(kept.t_len)) < 1e-12);
  }

  // keeping every column of an exactly zero-mean input is the identity
  write_text(dir / "zm.csv", "1,-3\n-1,3\n");
  REQUIRE(cli::cmd_preprocess((dir / "zm.csv").string(), 2,
                              (dir / "zm_out.csv").string()) == cli::kOk);
  const TimeSeries zm = read_series_csv((dir / "zm_out.csv").string());
  CHECK(zm.values == std::vector<double>{1, -3, -1, 3});

  CHECK(cli::cmd_preprocess((dir / "s.csv").string(), 9,
                            (dir / "x.csv").string()) == cli::kBadInput);
}

TEST_CASE("preprocess breaks variance ties by column index") {
  const fs::path dir = fresh_dir("preprocess_ties");
  write_text(dir / "s.csv", "1,5,1\n-1,5,-1\n1,5,1\n-1,5,-1\n");
  REQUIRE(cli::cmd_preprocess((dir / "s.csv").string(), 1,
                              (dir / "kept.csv").string()) == cli::kOk);
  const json manifest = read_json(dir / "kept.csv.manifest.json");
  CHECK(manifest.at("kept_columns") == json::array({0}));
}

TEST_CASE("crossval command writes the selection report") {
  const fs::path dir = fresh_dir("crossval");
  write_text(dir / "config.json", kSimulateConfig);
  REQUIRE(cli::cmd_simulate((dir / "config.json").string(),
                            (dir / "model").string()) == cli::kOk);
  write_text(dir / "grid.json",
             R"({"p_grid": [1], "lambda_grid": [0.02, 0.1, 0.5]})");

  cli::CrossvalArgs args;
  args.series_path = (dir / "model" / "series.csv").string();
  args.grid_path = (dir / "grid.json").string();
  args.n1 = 100;
  args.n2 = 10;
  args.out_path = (dir / "cv.json").string();
  args.workers = 2;
  REQUIRE(cli::cmd_crossval(args) == cli::kOk);

  const json cv = read_json(dir / "cv.json");
  CHECK(cv.at("grid").size() == 3);
  CHECK(cv.at("mean_err").size() == 3);
  CHECK(cv.at("n1") == 100);
  CHECK(cv.at("n2") == 10);
  const double best = cv.at("best").at("lambda").get<double>();
  CHECK((best == 0.02 || best == 0.1 || best == 0.5));
}

TEST_CASE("predict applies the fitted model to the series tail") {
  const fs::path dir = fresh_dir("predict");
  write_text(dir / "config.json", kSimulateConfig);
  REQUIRE(cli::cmd_simulate((dir / "config.json").string(),
                            (dir / "model").string()) == cli::kOk);

  REQUIRE(cli::cmd_predict((dir / "model").string(),
                           (dir / "model" / "series.csv").string(),
                           (dir / "yhat.csv").string()) == cli::kOk);
  const DenseMatrix yhat = read_matrix_csv((dir / "yhat.csv").string());
  REQUIRE(yhat.rows() == 1);
  REQUIRE(yhat.cols() == 10);

  const DenseMatrix a = read_matrix_csv((dir / "model" / "A_1.csv").string());
  const TimeSeries series =
      read_series_csv((dir / "model" / "series.csv").string());
  std::vector<double> last(series.row(series.t_len - 1),
                           series.row(series.t_len - 1) + 10);
  const std::vector<double> expect = predict_next({a}, {last});
  for (std::size_t j = 0; j < 10; ++j)
    CHECK(yhat(0, j) == doctest::Approx(expect[j]).epsilon(1e-12));
}

TEST_CASE("bench emits one row per method and is worker-invariant") {
  const fs::path dir = fresh_dir("bench");
  write_text(dir / "bench.json", R"({
    "pattern": {"kind": "band", "bandwidth": 1},
    "d": 6, "t_len": 60, "p": 1,
    "sigma": {"kind": "diagonal_scaled"},
    "kappa": 0.5, "seed": 3,
    "replicates": 2,
    "methods": ["direct", "lasso", "ridge"],
    "cv": {"n1": 25, "n2": 20, "grid_points": 4}
  })");

  REQUIRE(cli::cmd_bench((dir / "bench.json").string(), 1,
                         (dir / "w1").string()) == cli::kOk);
  REQUIRE(cli::cmd_bench((dir / "bench.json").string(), 4,
                         (dir / "w4").string()) == cli::kOk);

  CHECK(read_text(dir / "w1" / "table.csv") ==
        read_text(dir / "w4" / "table.csv"));
  CHECK(read_text(dir / "w1" / "bench.json") ==
        read_text(dir / "w4" / "bench.json"));

  const json out = read_json(dir / "w1" / "bench.json");
  REQUIRE(out.at("rows").size() == 3);
  for (const auto& row : out.at("rows")) {
    CHECK(row.at("n_ok").get<int>() + row.at("n_failed").get<int>() == 2);
    CHECK(std::isfinite(row.at("l1_mean").get<double>()));
  }
  CHECK(fs::exists(dir / "w1" / "timing.csv"));
}

TEST_CASE("bench selects the lag order when given a p grid") {
  const fs::path dir = fresh_dir("bench_pgrid");
  write_text(dir / "bench.json", R"({
    "pattern": {"kind": "band", "bandwidth": 1},
    "d": 5, "t_len": 80, "p": 2,
    "kappa": 0.3, "seed": 12,
    "replicates": 2,
    "methods": ["ridge"],
    "cv": {"n1": 30, "n2": 15, "grid_points": 4, "p_grid": [1, 2]}
  })");
  REQUIRE(cli::cmd_bench((dir / "bench.json").string(), 2,
                         (dir / "out").string()) == cli::kOk);
  const json out = read_json(dir / "out" / "bench.json");
  CHECK(out.at("rows").size() == 1);
  CHECK(std::isfinite(out.at("rows")[0].at("l1_mean").get<double>()));
}

TEST_CASE("bench sweep mode emits per-kappa rows") {
  const fs::path dir = fresh_dir("bench_sweep");
  write_text(dir / "bench.json", R"({
    "pattern": {"kind": "band", "bandwidth": 1},
    "d": 6, "t_len": 60, "p": 1,
    "sigma": {"kind": "diagonal_scaled"},
    "kappa": 0.5, "seed": 3,
    "replicates": 2,
    "methods": ["direct"],
    "cv": {"n1": 25, "n2": 20, "grid_points": 4},
    "sweep_kappas": [0.2, 0.6]
  })");
  REQUIRE(cli::cmd_bench((dir / "bench.json").string(), 2,
                         (dir / "out").string()) == cli::kOk);
  const json out = read_json(dir / "out" / "bench.json");
  REQUIRE(out.at("sweep").size() == 2);
  CHECK(out.at("sweep")[0].at("kappa") == 0.2);
  const std::string table = read_text(dir / "out" / "table.csv");
  CHECK(table.rfind("kappa,method", 0) == 0);
}
