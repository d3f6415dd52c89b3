#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sparsevar::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kBadInput = 2;
inline constexpr int kNotStationary = 3;
inline constexpr int kEstimationFailed = 4;

inline constexpr const char* kSpecVersion = "1.0";

int cmd_simulate(const std::string& config_path, const std::string& out_dir);

struct EstimateArgs {
  std::string series_path;
  std::string method = "direct";
  std::size_t p = 1;
  std::optional<double> lambda;   // fixed tuning value
  std::string cv_path;            // cross-validation spec (JSON)
  std::string truth_dir;          // optional ground-truth bundle
  std::string out_dir;
  unsigned workers = 1;
};

int cmd_estimate(const EstimateArgs& args);

int cmd_preprocess(const std::string& series_path, std::size_t keep,
                   const std::string& out_path);

struct CrossvalArgs {
  std::string series_path;
  std::string grid_path;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::optional<std::size_t> t0;  // default: one past the series end
  std::string method = "direct";
  std::string out_path;
  unsigned workers = 1;
};

int cmd_crossval(const CrossvalArgs& args);

int cmd_predict(const std::string& model_dir, const std::string& series_path,
                const std::string& out_path);

int cmd_bench(const std::string& config_path, unsigned workers,
              const std::string& out_dir);

}  // namespace sparsevar::cli
