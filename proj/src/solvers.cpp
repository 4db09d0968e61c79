#include "sbk/solvers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace sbk {

namespace {

inline double st_scalar(double v, double lambda) {
  return v > lambda ? v - lambda : (v < -lambda ? v + lambda : 0.0);
}

// same componentwise map as soft_threshold, into an existing vector
inline void st_into(const Eigen::VectorXd& y, double lambda, Eigen::VectorXd& out) {
  out.resize(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = st_scalar(y[i], lambda);
}

void validate_config(const SolverConfig& cfg, const SystemView& sys) {
  if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("SolverConfig: lambda must be >= 0");
  if (!(cfg.gamma > 0.0)) throw std::invalid_argument("SolverConfig: gamma must be > 0");
  if (!(cfg.tol >= 0.0)) throw std::invalid_argument("SolverConfig: tol must be >= 0");
  if (cfg.max_iters < 0) throw std::invalid_argument("SolverConfig: max_iters must be >= 0");
  if (cfg.method == Method::scbnb) {
    if (!(cfg.delta > 0.0 && cfg.delta < 2.0))
      throw std::invalid_argument("SolverConfig: delta must be in (0,2)");
    if (cfg.block_size < 0 || cfg.block_size > sys.cols())
      throw std::invalid_argument("SolverConfig: block_size must be in [1, n] (or 0 for default)");
  }
  if (cfg.init == SolverConfig::Init::given && cfg.init_dual.size() != sys.cols())
    throw std::invalid_argument("SolverConfig: init_dual has wrong length");
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::nbk: return "nbk";
    case Method::rnbk: return "rnbk";
    case Method::mrnbk: return "mrnbk";
    case Method::rmrnbk: return "rmrnbk";
    case Method::scbnb: return "scbnb";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "nbk") return Method::nbk;
  if (name == "rnbk") return Method::rnbk;
  if (name == "mrnbk") return Method::mrnbk;
  if (name == "rmrnbk") return Method::rmrnbk;
  if (name == "scbnb") return Method::scbnb;
  return std::nullopt;
}

Eigen::Index default_block_size(Eigen::Index n) {
  if (n == 100) return 25;
  return std::min<Eigen::Index>(30, n);
}

BlockPartition partition_columns(Eigen::Index n, Eigen::Index q) {
  if (q < 1 || q > n) throw std::invalid_argument("partition_columns: need 1 <= q <= n");
  BlockPartition part;
  for (Eigen::Index start = 0; start < n; start += q) {
    const Eigen::Index len = std::min(q, n - start);
    std::vector<Eigen::Index> block(static_cast<std::size_t>(len));
    for (Eigen::Index k = 0; k < len; ++k) block[static_cast<std::size_t>(k)] = start + k;
    part.blocks.push_back(std::move(block));
  }
  return part;
}

Eigen::Index select_row_weighted(const Eigen::VectorXd& residual, Rng& rng) {
  const double total = residual.squaredNorm();
  if (!(total > 0.0)) throw std::domain_error("select_row_weighted: residual is zero");
  const double u = rng.uniform01() * total;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < residual.size(); ++i) {
    acc += residual[i] * residual[i];
    if (u < acc) return i;
  }
  for (Eigen::Index i = residual.size() - 1; i >= 0; --i)
    if (residual[i] != 0.0) return i;
  return residual.size() - 1;  // unreachable
}

Eigen::Index select_row_max(const Eigen::VectorXd& residual) {
  Eigen::Index best = -1;
  double best_mag = 0.0;
  for (Eigen::Index i = 0; i < residual.size(); ++i) {
    const double mag = std::abs(residual[i]);
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  if (best < 0) throw std::domain_error("select_row_max: residual is zero");
  return best;
}

std::optional<double> exact_dual_step(const Eigen::VectorXd& x_star, const Eigen::VectorXd& a,
                                      double beta, double lambda) {
  if (a.size() != x_star.size()) throw std::invalid_argument("exact_dual_step: length mismatch");
  if (!(lambda >= 0.0)) throw std::invalid_argument("exact_dual_step: lambda must be >= 0");
  if (a.squaredNorm() == 0.0) throw std::invalid_argument("exact_dual_step: zero direction");

  auto gprime = [&](double t) {
    // beta - <a, S_lambda(x* - t a)>, branchless for vectorization
    const auto u = x_star.array() - t * a.array();
    const auto shrunk = (u.abs() - lambda).max(0.0);
    return beta - (a.array() * u.sign() * shrunk).sum();
  };

  // g' is nondecreasing and tends to -inf / +inf, so a sign change exists for
  // any nonzero direction; the expansion cap only guards degenerate floats.
  constexpr double kExpandLimit = 1e30;
  double lo = -1.0, hi = 1.0;
  double glo = gprime(lo);
  while (glo >= 0.0) {
    lo *= 2.0;
    if (-lo > kExpandLimit) return std::nullopt;
    glo = gprime(lo);
  }
  double ghi = gprime(hi);
  while (ghi < 0.0) {
    hi *= 2.0;
    if (hi > kExpandLimit) return std::nullopt;
    ghi = gprime(hi);
  }

  // keep g'(lo) < 0 <= g'(hi): converges to the left endpoint of the
  // minimizer set when g' is flat at zero
  while (hi - lo > 1e-12 * (1.0 + std::min(std::abs(lo), std::abs(hi)))) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (gprime(mid) >= 0.0) hi = mid;
    else lo = mid;
  }

  // one secant step on the final bracket; g' is piecewise linear, so this is
  // usually exact (and recovers the classical Kaczmarz step at lambda = 0)
  glo = gprime(lo);
  ghi = gprime(hi);
  if (ghi > 0.0 && ghi > glo) {
    const double ts = hi - ghi * (hi - lo) / (ghi - glo);
    if (std::isfinite(ts) && ts >= lo && ts <= hi && gprime(ts) >= 0.0) return ts;
  }
  return hi;
}

double relaxed_step(double f_i, const Eigen::VectorXd& grad_i, double gamma) {
  const double gn2 = grad_i.squaredNorm();
  if (gn2 == 0.0) throw std::invalid_argument("relaxed_step: zero gradient");
  if (!(gamma > 0.0)) throw std::invalid_argument("relaxed_step: gamma must be > 0");
  return gamma * f_i / gn2;
}

DualPair scbnb_step(const DualPair& pair, const SystemView& sys,
                    const std::vector<Eigen::Index>& block, double delta, double gamma,
                    const SparsityPotential& pot) {
  const Eigen::VectorXd r = sys.residual(pair.primal);
  const Eigen::MatrixXd b = sys.jacobian_columns(block, pair.primal);
  const Eigen::VectorXd g = b.transpose() * r;
  if (g.squaredNorm() == 0.0) return pair;
  const Eigen::VectorXd h = b * g;
  const double hn2 = h.squaredNorm();
  if (hn2 < 1e-300) return pair;  // rank-deficient block at this point
  DualPair next = pair;
  const double coef = delta * gamma * g.squaredNorm() / hn2;
  for (std::size_t k = 0; k < block.size(); ++k) next.dual[block[k]] -= coef * g[static_cast<Eigen::Index>(k)];
  next.primal = soft_threshold(next.dual, pot.lambda);
  return next;
}

SolveReport run_solver(const SystemView& sys, const SolverConfig& cfg,
                       const Eigen::VectorXd* ground_truth) {
  validate_config(cfg, sys);
  const Eigen::Index n = sys.cols();
  if (ground_truth && ground_truth->size() != n)
    throw std::invalid_argument("run_solver: ground truth has wrong length");

  Rng rng(cfg.seed);
  Eigen::VectorXd dual;
  switch (cfg.init) {
    case SolverConfig::Init::given: dual = cfg.init_dual; break;
    case SolverConfig::Init::zero: dual = Eigen::VectorXd::Zero(n); break;
    case SolverConfig::Init::standard_normal: {
      dual.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) dual[i] = rng.normal();
      break;
    }
  }
  Eigen::VectorXd x = soft_threshold(dual, cfg.lambda);

  SolveReport rep;
  rep.method = cfg.method;
  const SparsityPotential pot(cfg.lambda);

  Eigen::VectorXd r = sys.residual(x);
  const double denom = r.squaredNorm();
  if (ground_truth)
    rep.bregman_history = std::vector<double>{bregman_distance(dual, x, *ground_truth, pot)};
  if (denom == 0.0) {
    rep.residual_history = {0.0};
    rep.final_relative_residual = 0.0;
    rep.converged = true;
    rep.final_primal = std::move(x);
    return rep;
  }

  double rel = 1.0;
  rep.residual_history.push_back(rel);

  BlockPartition part;
  if (cfg.method == Method::scbnb) {
    const Eigen::Index q = cfg.block_size > 0 ? cfg.block_size : default_block_size(n);
    part = partition_columns(n, q);
  }
  const bool weighted = cfg.method == Method::nbk || cfg.method == Method::rnbk;
  const bool exact = cfg.method == Method::nbk || cfg.method == Method::mrnbk;

  const auto t0 = std::chrono::steady_clock::now();
  while (rep.iterations < cfg.max_iters && rel > cfg.tol) {
    if (cfg.method == Method::scbnb) {
      const auto& block = part.blocks[rng.uniform_below(part.blocks.size())];
      const Eigen::MatrixXd b = sys.jacobian_columns(block, x);
      const Eigen::VectorXd g = b.transpose() * r;
      if (g.squaredNorm() == 0.0) {
        ++rep.skipped_steps;
      } else {
        const Eigen::VectorXd h = b * g;
        const double hn2 = h.squaredNorm();
        if (hn2 < 1e-300) {
          ++rep.degenerate_steps;
        } else {
          const double coef = cfg.delta * cfg.gamma * g.squaredNorm() / hn2;
          for (std::size_t k = 0; k < block.size(); ++k)
            dual[block[k]] -= coef * g[static_cast<Eigen::Index>(k)];
          st_into(dual, cfg.lambda, x);
        }
      }
    } else {
      const Eigen::Index i = weighted ? select_row_weighted(r, rng) : select_row_max(r);
      const double fi = r[i];
      const Eigen::VectorXd grad = sys.jacobian_row(i, x);
      const double gn2 = grad.squaredNorm();
      if (fi == 0.0 || gn2 == 0.0) {
        ++rep.skipped_steps;
      } else {
        double t;
        if (exact) {
          const double beta = grad.dot(x) - fi;
          const auto exact_t = exact_dual_step(dual, grad, beta, cfg.lambda);
          t = exact_t ? *exact_t : cfg.gamma * fi / gn2;
        } else {
          t = cfg.gamma * fi / gn2;
        }
        dual -= t * grad;
        st_into(dual, cfg.lambda, x);
      }
    }
    ++rep.iterations;
    r = sys.residual(x);
    rel = r.squaredNorm() / denom;
    rep.residual_history.push_back(rel);
    if (ground_truth)
      rep.bregman_history->push_back(bregman_distance(dual, x, *ground_truth, pot));
  }
  const auto t1 = std::chrono::steady_clock::now();

  rep.wall_time = std::chrono::duration<double>(t1 - t0).count();
  rep.final_relative_residual = rel;
  rep.converged = rel <= cfg.tol;
  rep.final_primal = std::move(x);
  return rep;
}

double relative_residual(const SystemView& sys, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x0) {
  const double denom = sys.residual(x0).squaredNorm();
  if (denom == 0.0) throw std::domain_error("relative_residual: zero initial residual");
  return sys.residual(x).squaredNorm() / denom;
}

}  // namespace sbk
