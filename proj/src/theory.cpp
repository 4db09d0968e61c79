#include "sbk/theory.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "sbk/potential.hpp"

namespace sbk {

std::pair<double, double> estimate_spectral_bounds(const SystemView& sys,
                                                   const std::vector<Eigen::VectorXd>& probes) {
  if (probes.empty()) throw std::invalid_argument("estimate_spectral_bounds: no probes");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& x : probes) {
    const Eigen::MatrixXd jac = sys.jacobian(x);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    hi = std::max(hi, sv(0));
    lo = std::min(lo, sv(sv.size() - 1));
  }
  return {lo, hi};
}

std::optional<double> admissible_eta_interval(double sigma_min, double sigma_max) {
  if (!(sigma_min > 0.0) || !(sigma_max >= sigma_min))
    throw std::invalid_argument("admissible_eta_interval: need 0 < sigma_min <= sigma_max");
  const double sp = sigma_min * sigma_min, sb = sigma_max * sigma_max;
  const double a = sp * sp;
  const double b = sp * sb - sb * sb;
  if (b == 0.0) return 1.0;
  if (a + b <= 0.0) return std::nullopt;
  const double upper = (a - b) / (a + b) - 2.0 * std::sqrt(std::abs(a * b)) / (a + b);
  return std::min(1.0, upper);
}

double step_upper_bound_Q(const TheoryConstants& c) {
  if (!(c.sigma_min > 0.0) || !(c.sigma_max >= c.sigma_min))
    throw std::invalid_argument("step_upper_bound_Q: bad spectral bounds");
  if (!(c.eta >= 0.0 && c.eta < 1.0)) throw std::invalid_argument("step_upper_bound_Q: eta must be in [0,1)");
  return detail::step_upper_bound_q_impl<double>(c.sigma_min, c.sigma_max, c.eta);
}

double contraction_factor(const TheoryConstants& c) {
  if (!(c.sigma_min > 0.0) || !(c.sigma_max >= c.sigma_min))
    throw std::invalid_argument("contraction_factor: bad spectral bounds");
  if (!(c.eta >= 0.0 && c.eta < 1.0)) throw std::invalid_argument("contraction_factor: eta must be in [0,1)");
  if (c.tau < 1) throw std::invalid_argument("contraction_factor: tau must be >= 1");
  if (!(c.m_smooth > 0.0) || !(c.gamma > 0.0))
    throw std::invalid_argument("contraction_factor: moduli must be positive");
  return detail::contraction_factor_impl<double>(c.sigma_min, c.sigma_max, c.eta,
                                                 static_cast<double>(c.tau), c.m_smooth, c.gamma,
                                                 c.delta);
}

double error_bound_from_rate(double c, int k, double phi_at_solution, double gamma) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("error_bound_from_rate: need 0 < c <= 1");
  if (k < 0) throw std::invalid_argument("error_bound_from_rate: k must be >= 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("error_bound_from_rate: gamma must be > 0");
  if (!(phi_at_solution >= 0.0)) throw std::invalid_argument("error_bound_from_rate: phi must be >= 0");
  return 2.0 / gamma * std::pow(1.0 - c, k) * phi_at_solution;
}

ConeReport verify_tangential_cone(
    const SystemView& sys, const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs,
    double eta) {
  ConeReport rep;
  for (const auto& [x1, x2] : pairs) {
    const Eigen::VectorXd r1 = sys.residual(x1);
    const Eigen::VectorXd r2 = sys.residual(x2);
    const Eigen::VectorXd lin = sys.jacobian(x1) * (x1 - x2);
    for (Eigen::Index i = 0; i < r1.size(); ++i) {
      const double den = std::abs(r1[i] - r2[i]);
      if (den < 1e-14) {
        ++rep.skipped;
        continue;
      }
      const double num = std::abs(r1[i] - r2[i] - lin[i]);
      rep.max_ratio = std::max(rep.max_ratio, num / den);
      ++rep.evaluated;
    }
  }
  rep.pass = rep.max_ratio <= eta;
  return rep;
}

InequalityReport verify_inequality_chain(int samples, double lambda, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("verify_inequality_chain: samples must be positive");
  const SparsityPotential pot(lambda);
  const SparsityPotential smooth_pot(0.0);
  Rng rng(seed);
  InequalityReport rep;
  rep.samples = samples;

  for (int s = 0; s < samples; ++s) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_below(12));
    const double scale = std::pow(10.0, 2.0 * rng.uniform01() - 1.0);
    Eigen::VectorXd xs1(n), xs2(n), target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      xs1[i] = scale * rng.normal();
      xs2[i] = scale * rng.normal();
      target[i] = scale * rng.normal();
    }
    const Eigen::VectorXd x1 = soft_threshold(xs1, lambda);
    const Eigen::VectorXd x2 = soft_threshold(xs2, lambda);

    // descent inequality of the dual update (gamma = 1):
    // D(x2, t) <= D(x1, t) + <xs2 - xs1, x1 - t> + 0.5*||xs2 - xs1||^2
    {
      const double lhs = bregman_distance(xs2, x2, target, pot);
      const double rhs = bregman_distance(xs1, x1, target, pot) +
                         (xs2 - xs1).dot(x1 - target) + 0.5 * (xs2 - xs1).squaredNorm();
      rep.descent_slack = std::max(rep.descent_slack, lhs - rhs);
    }

    // strong-convexity chain:
    // 0.5*||x1-x2||^2 <= D(x1, x2) <= <xs1-xs2, x1-x2> <= ||xs1-xs2||*||x1-x2||
    {
      const double d = bregman_distance(xs1, x1, x2, pot);
      const double inner = (xs1 - xs2).dot(x1 - x2);
      const double outer = (xs1 - xs2).norm() * (x1 - x2).norm();
      rep.convexity_chain_slack = std::max(rep.convexity_chain_slack, 0.5 * (x1 - x2).squaredNorm() - d);
      rep.convexity_chain_slack = std::max(rep.convexity_chain_slack, d - inner);
      rep.convexity_chain_slack = std::max(rep.convexity_chain_slack, inner - outer);
    }

    // smooth-case identities at lambda = 0 (M = 1): for phi = 0.5*||.||^2 the
    // smoothness inequalities hold with equality
    {
      const double gap2 =
          phi_value(x2, smooth_pot) -
          (phi_value(x1, smooth_pot) + x1.dot(x2 - x1) + 0.5 * (x1 - x2).squaredNorm());
      const double gap3 = (x2 - x1).dot(x2 - x1) - (x1 - x2).squaredNorm();
      rep.smoothness_slack = std::max(rep.smoothness_slack, std::abs(gap2));
      rep.smoothness_slack = std::max(rep.smoothness_slack, std::abs(gap3));
    }
  }

  // block tangential cone on linear systems: eta = 0, equality within round-off
  {
    const int lin_checks = std::min(samples, 200);
    for (int s = 0; s < lin_checks; ++s) {
      const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.uniform_below(8));
      const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_below(6));
      Eigen::MatrixXd a(m, n);
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i) a(i, j) = rng.normal();
      Eigen::VectorXd truth(n), x1(n), x2(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        truth[i] = rng.normal();
        x1[i] = rng.normal();
        x2[i] = rng.normal();
      }
      const LinearSystem sys(a, a * truth, truth, 0.0, 0);
      const Eigen::VectorXd diff = sys.residual(x1) - sys.residual(x2);
      const Eigen::VectorXd lin = sys.jacobian(x1) * (x1 - x2);
      double lhs = 0.0, rhs = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (rng.uniform01() < 0.5) continue;  // random row subset
        lhs += lin[i] * lin[i];
        rhs += diff[i] * diff[i];
      }
      rep.block_cone_slack = std::max(rep.block_cone_slack, lhs - rhs);
    }
  }

  rep.pass = rep.descent_slack <= 1e-9 && rep.block_cone_slack <= 1e-9 && rep.convexity_chain_slack <= 1e-9 &&
             rep.smoothness_slack <= 1e-9;
  return rep;
}

}  // namespace sbk
