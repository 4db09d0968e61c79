#pragma once

#include <Eigen/Core>

namespace sbk {

/// The sparsity-inducing potential phi(x) = lambda*||x||_1 + (gamma/2)*||x||_2^2.
/// gamma is the strong-convexity modulus; the canonical potential used by all
/// solvers has gamma == 1, which makes soft_threshold the conjugate gradient
/// map x = grad phi*(x*).
struct SparsityPotential {
  double lambda = 0.0;
  double gamma = 1.0;

  explicit SparsityPotential(double lambda_, double gamma_ = 1.0);

  bool canonical() const { return gamma == 1.0; }
};

/// Componentwise shrinkage S_lambda: y -> sign(y) * max(|y| - lambda, 0).
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& y, double lambda);

/// phi(x).
double phi_value(const Eigen::VectorXd& x, const SparsityPotential& pot);

/// phi*(y) = 0.5*||S_lambda(y)||_2^2 in closed form (canonical potential only).
double conjugate_value(const Eigen::VectorXd& y, const SparsityPotential& pot);

/// Bregman distance D_phi^{x*}(x, y) = phi(y) - phi(x) - <x*, y - x>.
/// Requires the canonical pairing x = S_lambda(x*); rejects pairings that
/// drift beyond 1e-10 since the solvers produce them exactly.
double bregman_distance(const Eigen::VectorXd& x_star, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y, const SparsityPotential& pot);

/// Primal/dual iterate pair with the invariant primal = S_lambda(dual).
struct DualPair {
  Eigen::VectorXd primal;
  Eigen::VectorXd dual;

  static DualPair from_dual(const Eigen::VectorXd& dual, const SparsityPotential& pot);
};

}  // namespace sbk
