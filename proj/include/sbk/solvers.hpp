#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbk/potential.hpp"
#include "sbk/problem.hpp"
#include "sbk/rng.hpp"

namespace sbk {

/// The five iteration rules. nbk/rnbk select rows with probability
/// |r_i|^2/||r||^2; mrnbk/rmrnbk select the max-|r_i| row; scbnb samples a
/// column block uniformly. nbk/mrnbk use the exact dual line search with a
/// relaxed fallback, rnbk/rmrnbk always use the relaxed step.
enum class Method { nbk, rnbk, mrnbk, rmrnbk, scbnb };

const char* method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct SolverConfig {
  Method method = Method::scbnb;
  double delta = 1.0;           // scbnb relaxation, in (0,2)
  double gamma = 1.0;           // relaxed-step / scbnb step parameter
  Eigen::Index block_size = 0;  // scbnb q; 0 picks the default for n
  double lambda = 2.0;          // l1 weight of the potential
  double tol = 1e-6;            // relative-residual threshold
  int max_iters = 1000;
  std::uint64_t seed = 0;

  enum class Init { standard_normal, zero, given };
  Init init = Init::standard_normal;
  Eigen::VectorXd init_dual;  // used when init == given
};

/// Default block size: 25 for n == 100, otherwise min(30, n).
Eigen::Index default_block_size(Eigen::Index n);

/// Contiguous column blocks [0..q), [q..2q), ...; the last one may be ragged.
struct BlockPartition {
  std::vector<std::vector<Eigen::Index>> blocks;
};
BlockPartition partition_columns(Eigen::Index n, Eigen::Index q);

/// Row index drawn with probability r_i^2 / ||r||^2.
Eigen::Index select_row_weighted(const Eigen::VectorXd& residual, Rng& rng);

/// Smallest row index attaining max_i |r_i|.
Eigen::Index select_row_max(const Eigen::VectorXd& residual);

/// Exact dual step: a global minimizer of
///   g(t) = 0.5*||S_lambda(x* - t a)||^2 + t*beta,
/// i.e. the Bregman projection step onto the hyperplane <a, x> = beta.
/// g'(t) = beta - <a, S_lambda(x* - t a)> is continuous and nondecreasing;
/// the root is bracketed by geometric expansion from [-1, 1] and bisected to
/// width 1e-12*(1+|t|), returning the left endpoint when the minimizer set is
/// an interval. Returns nullopt when no finite minimizer exists (the caller
/// then falls back to the relaxed step).
std::optional<double> exact_dual_step(const Eigen::VectorXd& x_star, const Eigen::VectorXd& a,
                                      double beta, double lambda);

/// Polyak-like relaxed step t = gamma * f_i / ||grad_i||^2.
double relaxed_step(double f_i, const Eigen::VectorXd& grad_i, double gamma);

/// One scbnb update: with B the Jacobian columns of `block` at pair.primal,
/// g = B^T f(x) and h = B g, the block dual coordinates are decremented by
/// delta*gamma*(||g||^2/||h||^2)*g and the primal re-thresholded. g = 0
/// leaves the pair unchanged.
DualPair scbnb_step(const DualPair& pair, const SystemView& sys,
                    const std::vector<Eigen::Index>& block, double delta, double gamma,
                    const SparsityPotential& pot);

struct SolveReport {
  Method method = Method::scbnb;
  int iterations = 0;      // update steps executed (IT)
  double wall_time = 0.0;  // seconds around the iteration loop only
  double final_relative_residual = 0.0;
  std::vector<double> residual_history;           // length iterations + 1, entry 0 at x0
  std::optional<std::vector<double>> bregman_history;  // D_phi(x_k, x_hat) when truth known
  Eigen::VectorXd final_primal;
  bool converged = false;
  int skipped_steps = 0;     // guard hits: f_i = 0, grad = 0 or g = 0
  int degenerate_steps = 0;  // scbnb h ~ 0 with g != 0
};

/// Runs the configured method on the system. The starting dual is the given
/// vector, zero, or standard normal drawn from the run seed; x0 = S_lambda.
/// Stops when ||f(x_k)||^2/||f(x_0)||^2 <= tol or after max_iters steps.
SolveReport run_solver(const SystemView& sys, const SolverConfig& config,
                       const Eigen::VectorXd* ground_truth = nullptr);

/// ||f(x)||^2 / ||f(x0)||^2; requires f(x0) != 0.
double relative_residual(const SystemView& sys, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x0);

}  // namespace sbk
