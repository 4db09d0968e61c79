#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sbk/problem.hpp"
#include "sbk/solvers.hpp"

namespace sbk {

/// Solver parameters shared by every method in an experiment.
struct MethodParams {
  double delta = 1.0;
  double gamma = 1.0;
  Eigen::Index block_size = 0;  // 0: per-size default
  double lambda = 2.0;
};

inline std::vector<Method> all_methods() {
  return {Method::nbk, Method::rnbk, Method::mrnbk, Method::rmrnbk, Method::scbnb};
}

/// Method-comparison table (IT/CPU per cell, medians over seeded trials).
struct ComparisonSpec {
  std::vector<std::pair<int, int>> sizes;  // (m, n)
  std::vector<double> sparsities;
  MatrixKind kind = MatrixKind::gaussian;
  std::vector<Method> methods = all_methods();
  MethodParams params;                          // shared defaults
  std::map<Method, MethodParams> method_params; // per-method overrides
  double tol = 1e-6;
  int max_iters = 1000;
  int trials = 1;
  std::uint64_t base_seed = 0;
  int jobs = 1;
};

struct ComparisonRow {
  Method method;
  int m = 0, n = 0;
  double sp = 0.0;
  double median_it = 0.0;   // over converged trials; meaningless when failed
  double median_cpu = 0.0;  // seconds, same convention
  bool failed = false;      // the median trial did not converge within the cap
  int converged_trials = 0;
  int trials = 0;
};

/// One row per (size, sparsity, method). Cell seeds are derived from
/// (base_seed, m, n, sp, method, trial), so results do not depend on
/// evaluation order or on jobs.
std::vector<ComparisonRow> run_comparison(const ComparisonSpec& spec);

/// Success-rate grid: fraction of trials reaching tol within iter_cap from
/// the all-zero start.
struct SuccessRateSpec {
  int m = 100;
  std::vector<int> n_values;
  std::vector<double> sp_values;
  MatrixKind kind = MatrixKind::gaussian;
  std::vector<Method> methods = all_methods();
  MethodParams params;
  int trials = 100;
  int iter_cap = 3000;
  double tol = 1e-6;
  std::uint64_t base_seed = 0;
  int jobs = 1;
};

struct SuccessCell {
  Method method;
  int n = 0;
  double sp = 0.0;
  int successes = 0;
  int trials = 0;
  double rate = 0.0;  // successes / trials exactly
};

std::vector<SuccessCell> run_success_grid(const SuccessRateSpec& spec);

/// Image-recovery study on the noisy linear sensing system.
struct RecoverySpec {
  enum class Source { synthetic, file };
  Source source = Source::synthetic;
  std::string image_path;  // portable grey-map, used when source == file
  int image_side = 16;     // synthetic image side length
  int m = 400;
  double noise_level = 0.01;
  double lambda = 1.0;
  int iter_budget = 1000;
  std::vector<Method> methods = {Method::mrnbk, Method::rmrnbk, Method::scbnb};
  MethodParams params{1.0, 1.0, 0, 1.0};
  std::uint64_t seed = 0;
};

struct RecoveryResult {
  Eigen::MatrixXd truth;  // range-normalized original
  double psnr_initial = 0.0;
  struct PerMethod {
    Method method;
    Eigen::MatrixXd recovered;
    double psnr = 0.0;
    std::vector<double> residual_curve;
  };
  std::vector<PerMethod> per_method;
};

/// Runs each method for the full iteration budget (no tolerance stop),
/// reshapes the final primal to the image grid and scores it against the
/// normalized original.
RecoveryResult run_recovery(const RecoverySpec& spec);

/// 10*log10(max(truth)^2 / MSE), capped at 99 dB (also used for MSE = 0).
double psnr(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& recovered);

/// Sparse test image: round(0.15*side^2) standard-normal pixels on a zero
/// background (raw values; callers normalize to [0,1]).
Eigen::MatrixXd synthetic_sparse_image(int side, std::uint64_t seed);

/// Min-max normalization to [0,1]; constant images map to zero.
Eigen::MatrixXd normalize_range(const Eigen::MatrixXd& img);

}  // namespace sbk
