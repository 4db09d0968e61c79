#include "sbk/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbk/io.hpp"
#include "sbk/parallel.hpp"
#include "sbk/rng.hpp"

namespace sbk {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::uint64_t cell_seed(std::uint64_t base, int m, int n, double sp, Method method, int trial) {
  return derive_seed(base, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n),
                            seed_bits(sp), static_cast<std::uint64_t>(method),
                            static_cast<std::uint64_t>(trial)});
}

SolverConfig make_config(Method method, const MethodParams& p, double tol, int max_iters,
                         std::uint64_t seed) {
  SolverConfig cfg;
  cfg.method = method;
  cfg.delta = p.delta;
  cfg.gamma = p.gamma;
  cfg.block_size = p.block_size;
  cfg.lambda = p.lambda;
  cfg.tol = tol;
  cfg.max_iters = max_iters;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

std::vector<ComparisonRow> run_comparison(const ComparisonSpec& spec) {
  if (spec.sizes.empty() || spec.sparsities.empty() || spec.methods.empty())
    throw std::invalid_argument("run_comparison: empty spec");
  if (spec.trials < 1) throw std::invalid_argument("run_comparison: trials must be >= 1");

  struct Cell {
    int m, n;
    double sp;
    Method method;
  };
  std::vector<Cell> cells;
  for (const auto& [m, n] : spec.sizes)
    for (double sp : spec.sparsities)
      for (Method method : spec.methods) cells.push_back({m, n, sp, method});

  std::vector<ComparisonRow> rows(cells.size());
  parallel_for(spec.jobs, static_cast<long>(cells.size()), [&](long idx) {
    const Cell& cell = cells[static_cast<std::size_t>(idx)];
    std::vector<double> its, cpus;
    int converged = 0;
    std::vector<bool> ok(static_cast<std::size_t>(spec.trials));
    for (int trial = 0; trial < spec.trials; ++trial) {
      const std::uint64_t seed = cell_seed(spec.base_seed, cell.m, cell.n, cell.sp, cell.method, trial);
      const QuadraticSystem sys =
          generate_quadratic_system(cell.m, cell.n, cell.sp, spec.kind, mix_seed(seed, 11));
      const auto it = spec.method_params.find(cell.method);
      const MethodParams& params = it != spec.method_params.end() ? it->second : spec.params;
      const SolverConfig cfg =
          make_config(cell.method, params, spec.tol, spec.max_iters, mix_seed(seed, 13));
      const SolveReport rep = run_solver(sys, cfg);
      ok[static_cast<std::size_t>(trial)] = rep.converged;
      if (rep.converged) {
        ++converged;
        its.push_back(static_cast<double>(rep.iterations));
        cpus.push_back(rep.wall_time);
      }
    }
    ComparisonRow row;
    row.method = cell.method;
    row.m = cell.m;
    row.n = cell.n;
    row.sp = cell.sp;
    row.converged_trials = converged;
    row.trials = spec.trials;
    row.failed = 2 * converged < spec.trials + 1;  // the median trial hit the cap
    row.median_it = median(its);
    row.median_cpu = median(cpus);
    rows[static_cast<std::size_t>(idx)] = row;
  });
  return rows;
}

std::vector<SuccessCell> run_success_grid(const SuccessRateSpec& spec) {
  if (spec.n_values.empty() || spec.sp_values.empty() || spec.methods.empty())
    throw std::invalid_argument("run_success_grid: empty spec");
  if (spec.trials < 1) throw std::invalid_argument("run_success_grid: trials must be >= 1");
  if (spec.iter_cap < 0) throw std::invalid_argument("run_success_grid: iter_cap must be >= 0");

  struct Cell {
    Method method;
    int n;
    double sp;
  };
  std::vector<Cell> cells;
  for (Method method : spec.methods)
    for (int n : spec.n_values)
      for (double sp : spec.sp_values) cells.push_back({method, n, sp});

  std::vector<SuccessCell> grid(cells.size());
  parallel_for(spec.jobs, static_cast<long>(cells.size()), [&](long idx) {
    const Cell& cell = cells[static_cast<std::size_t>(idx)];
    int successes = 0;
    for (int trial = 0; trial < spec.trials; ++trial) {
      const std::uint64_t seed = cell_seed(spec.base_seed, spec.m, cell.n, cell.sp, cell.method, trial);
      const QuadraticSystem sys =
          generate_quadratic_system(spec.m, cell.n, cell.sp, spec.kind, mix_seed(seed, 11));
      SolverConfig cfg =
          make_config(cell.method, spec.params, spec.tol, spec.iter_cap, mix_seed(seed, 13));
      cfg.init = SolverConfig::Init::zero;  // x0 = x0* = 0 protocol
      const SolveReport rep = run_solver(sys, cfg);
      if (rep.converged) ++successes;
    }
    SuccessCell out;
    out.method = cell.method;
    out.n = cell.n;
    out.sp = cell.sp;
    out.successes = successes;
    out.trials = spec.trials;
    out.rate = static_cast<double>(successes) / static_cast<double>(spec.trials);
    grid[static_cast<std::size_t>(idx)] = out;
  });
  return grid;
}

double psnr(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& recovered) {
  if (truth.rows() != recovered.rows() || truth.cols() != recovered.cols())
    throw std::invalid_argument("psnr: shape mismatch");
  const double peak = truth.maxCoeff();
  if (peak == 0.0 && truth.minCoeff() == 0.0)
    throw std::invalid_argument("psnr: truth image is identically zero");
  const double mse = (truth - recovered).squaredNorm() / static_cast<double>(truth.size());
  if (mse == 0.0) return 99.0;
  return std::min(99.0, 10.0 * std::log10(peak * peak / mse));
}

Eigen::MatrixXd synthetic_sparse_image(int side, std::uint64_t seed) {
  if (side <= 0) throw std::invalid_argument("synthetic_sparse_image: side must be positive");
  const Eigen::Index pixels = static_cast<Eigen::Index>(side) * side;
  const auto k = static_cast<Eigen::Index>(std::llround(0.15 * static_cast<double>(pixels)));
  Rng rng(seed);
  Eigen::MatrixXd img = Eigen::MatrixXd::Zero(side, side);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(pixels));
  for (Eigen::Index i = 0; i < pixels; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::size_t>(pixels - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    const Eigen::Index flat = idx[static_cast<std::size_t>(i)];
    // folded normal magnitudes: intensities are nonnegative like a digit
    // image, so range normalization keeps the background at exactly zero
    img(flat / side, flat % side) = std::abs(rng.normal());
  }
  return img;
}

Eigen::MatrixXd normalize_range(const Eigen::MatrixXd& img) {
  if (img.size() == 0) throw std::invalid_argument("normalize_range: empty image");
  const double lo = img.minCoeff(), hi = img.maxCoeff();
  if (hi == lo) return Eigen::MatrixXd::Zero(img.rows(), img.cols());
  return (img.array() - lo) / (hi - lo);
}

RecoveryResult run_recovery(const RecoverySpec& spec) {
  if (spec.m <= 0) throw std::invalid_argument("run_recovery: m must be positive");
  if (spec.iter_budget < 0) throw std::invalid_argument("run_recovery: iter_budget must be >= 0");
  if (spec.methods.empty()) throw std::invalid_argument("run_recovery: no methods");

  Eigen::MatrixXd raw;
  if (spec.source == RecoverySpec::Source::file) {
    raw = read_greymap(spec.image_path);
  } else {
    raw = synthetic_sparse_image(spec.image_side, mix_seed(spec.seed, 21));
  }
  const Eigen::MatrixXd truth_img = normalize_range(raw);
  const Eigen::Index rows = truth_img.rows(), cols = truth_img.cols();
  const Eigen::Index n = rows * cols;

  // row-major flattening; the same order is used to fold the result back
  Eigen::VectorXd signal(n);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) signal[r * cols + c] = truth_img(r, c);

  const LinearSystem sys =
      generate_linear_sensing(spec.m, n, signal, spec.noise_level, mix_seed(spec.seed, 22));

  RecoveryResult result;
  result.truth = truth_img;
  result.psnr_initial = psnr(truth_img, Eigen::MatrixXd::Zero(rows, cols));

  for (Method method : spec.methods) {
    MethodParams p = spec.params;
    p.lambda = spec.lambda;
    SolverConfig cfg = make_config(method, p, 0.0, spec.iter_budget,
                                   derive_seed(spec.seed, {23, static_cast<std::uint64_t>(method)}));
    cfg.init = SolverConfig::Init::zero;  // zero starting subgradient
    const SolveReport rep = run_solver(sys, cfg);

    RecoveryResult::PerMethod out;
    out.method = method;
    out.recovered.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) out.recovered(r, c) = rep.final_primal[r * cols + c];
    out.psnr = psnr(truth_img, out.recovered);
    out.residual_curve = rep.residual_history;
    result.per_method.push_back(std::move(out));
  }
  return result;
}

}  // namespace sbk
