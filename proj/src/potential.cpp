#include "sbk/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace sbk {

SparsityPotential::SparsityPotential(double lambda_, double gamma_)
    : lambda(lambda_), gamma(gamma_) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("SparsityPotential: lambda must be >= 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("SparsityPotential: gamma must be > 0");
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& y, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("soft_threshold: lambda must be >= 0");
  if (lambda == 0.0) return y;
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double v = y[i];
    out[i] = v > lambda ? v - lambda : (v < -lambda ? v + lambda : 0.0);
  }
  return out;
}

double phi_value(const Eigen::VectorXd& x, const SparsityPotential& pot) {
  return pot.lambda * x.lpNorm<1>() + 0.5 * pot.gamma * x.squaredNorm();
}

double conjugate_value(const Eigen::VectorXd& y, const SparsityPotential& pot) {
  if (!pot.canonical())
    throw std::invalid_argument("conjugate_value: closed form requires gamma == 1");
  return 0.5 * soft_threshold(y, pot.lambda).squaredNorm();
}

double bregman_distance(const Eigen::VectorXd& x_star, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y, const SparsityPotential& pot) {
  if (x_star.size() != x.size() || x.size() != y.size())
    throw std::invalid_argument("bregman_distance: length mismatch");
  if (!pot.canonical())
    throw std::invalid_argument("bregman_distance: pairing check requires gamma == 1");
  const Eigen::VectorXd paired = soft_threshold(x_star, pot.lambda);
  if ((x - paired).lpNorm<Eigen::Infinity>() > 1e-10)
    throw std::invalid_argument("bregman_distance: x* is not a subgradient at x");
  return phi_value(y, pot) - phi_value(x, pot) - x_star.dot(y - x);
}

DualPair DualPair::from_dual(const Eigen::VectorXd& dual, const SparsityPotential& pot) {
  return DualPair{soft_threshold(dual, pot.lambda), dual};
}

}  // namespace sbk
