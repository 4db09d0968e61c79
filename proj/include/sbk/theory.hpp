#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sbk/problem.hpp"

namespace sbk {

/// Inputs to the convergence-rate formulas: spectral bounds of the Jacobian,
/// tangential-cone constant, number of column blocks, smoothness and
/// convexity moduli of the potential, and the relaxation delta.
struct TheoryConstants {
  double sigma_min = 1.0;
  double sigma_max = 1.0;
  double eta = 0.0;
  int tau = 1;
  double m_smooth = 1.0;
  double gamma = 1.0;
  double delta = 1.0;

  double a() const { return sigma_min * sigma_min * sigma_min * sigma_min; }
  double b() const {
    const double sp = sigma_min * sigma_min, sb = sigma_max * sigma_max;
    return sp * sb - sb * sb;
  }
};

/// Smallest / largest singular value of the Jacobian over the probe points
/// (an empirical inner estimate of the domain-wide bounds).
std::pair<double, double> estimate_spectral_bounds(const SystemView& sys,
                                                   const std::vector<Eigen::VectorXd>& probes);

/// Admissible tangential-cone interval (0, upper) derived from a = s_min^4
/// and b = s_min^2 s_max^2 - s_max^4: none when a + b <= 0, (0,1) when b = 0,
/// otherwise upper = min{1, (a-b)/(a+b) - 2 sqrt(|ab|)/(a+b)}.
std::optional<double> admissible_eta_interval(double sigma_min, double sigma_max);

/// Step-size cap Q = 2*(s_min^4/s_max^2*(1-eta) - (s_max^2-s_min^2)(1+eta)^2/(s_max^2(1-eta))).
double step_upper_bound_Q(const TheoryConstants& c);

/// Per-iteration expected Bregman contraction factor c; a value outside (0,1)
/// is a diagnostic, not an error.
double contraction_factor(const TheoryConstants& c);

/// Squared-error bound (2/gamma)*(1-c)^k*phi(x_hat) for a zero start.
double error_bound_from_rate(double c, int k, double phi_at_solution, double gamma);

namespace detail {

// The rate formulas are also instantiated in extended precision by the tests
// to guard against cancellation.
template <class S>
S step_upper_bound_q_impl(S sigma_min, S sigma_max, S eta) {
  const S sp = sigma_min * sigma_min, sb = sigma_max * sigma_max;
  const S one = S(1);
  return S(2) * (sp * sp / sb * (one - eta) - (sb - sp) * (one + eta) * (one + eta) / (sb * (one - eta)));
}

template <class S>
S contraction_factor_impl(S sigma_min, S sigma_max, S eta, S tau, S m_smooth, S gamma, S delta) {
  const S sp = sigma_min * sigma_min, sb = sigma_max * sigma_max;
  const S one = S(1);
  const S denom = S(2) * tau * (one + eta) * (one + eta) * sb * sp * (one - eta);
  const S lin = S(2) * gamma * sp * sp * (one - eta) * (one - eta) -
                S(2) * gamma * (sb - sp) * (one + eta) * (one + eta) * sb;
  const S quad = gamma * sp * sp * (one - eta);
  return (lin / denom * delta - quad / denom * delta * delta) / m_smooth;
}

}  // namespace detail

struct ConeReport {
  double max_ratio = 0.0;
  bool pass = false;
  int evaluated = 0;  // (pair, row) ratios actually formed
  int skipped = 0;    // denominators below 1e-14
};

/// Row-wise first-order-error ratios
///   |f_i(x1) - f_i(x2) - grad f_i(x1).(x1 - x2)| / |f_i(x1) - f_i(x2)|
/// over the given pairs; pass iff the maximum is <= eta. An empirical check
/// on the sampled region only, never a global certificate.
ConeReport verify_tangential_cone(const SystemView& sys,
                                  const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs,
                                  double eta);

struct InequalityReport {
  // worst LHS - RHS slack per inequality family; <= tolerance passes
  double descent_slack = 0.0;  // dual-step descent inequality
  double block_cone_slack = 0.0;  // block tangential cone, linear case (eta = 0)
  double convexity_chain_slack = 0.0;  // strong-convexity chain
  double smoothness_slack = 0.0;  // smooth-case identities at lambda = 0 (M = 1)
  int samples = 0;
  bool pass = false;
};

/// Fuzzes the descent/strong-convexity/smoothness inequalities on random
/// dual pairs with the canonical potential (gamma = 1), and the block cone
/// equality on random linear systems. Pass iff no violation beyond 1e-9.
InequalityReport verify_inequality_chain(int samples, double lambda, std::uint64_t seed);

}  // namespace sbk
