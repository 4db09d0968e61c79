#include <doctest.h>

#include <Eigen/Core>
#include <cmath>

#include "oracles.hpp"
#include "sbk/potential.hpp"
#include "sbk/rng.hpp"

using Eigen::VectorXd;
using namespace sbk;

namespace {
VectorXd vec(std::initializer_list<double> vals) {
  VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}
}  // namespace

TEST_CASE("phi_value on the canonical potential") {
  const SparsityPotential pot(2.0);
  CHECK(phi_value(vec({0, 0, 0}), pot) == 0.0);
  CHECK(phi_value(vec({1, -2}), pot) == doctest::Approx(8.5).epsilon(1e-14));
  const SparsityPotential pot1(1.0);
  CHECK(phi_value(vec({0.3}), pot1) == doctest::Approx(0.345).epsilon(1e-14));
}

TEST_CASE("SparsityPotential validates parameters") {
  CHECK_THROWS_AS(SparsityPotential(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(SparsityPotential(1.0, 0.0), std::invalid_argument);
  CHECK(SparsityPotential(0.0).canonical());
}

TEST_CASE("soft_threshold cases") {
  CHECK(soft_threshold(vec({3, -0.5, -4}), 2.0) == vec({1, 0, -2}));
  const VectorXd y = vec({0.7, -1.3, 2.2});
  CHECK(soft_threshold(y, 0.0) == y);
  CHECK(soft_threshold(vec({2}), 2.0) == vec({0}));
  CHECK_THROWS_AS(soft_threshold(y, -1.0), std::invalid_argument);
}

TEST_CASE("conjugate closed form matches the grid-search oracle") {
  // frozen values computed with oracles::grid_conjugate
  const SparsityPotential pot(2.0);
  CHECK(conjugate_value(vec({3}), pot) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(oracles::grid_conjugate(vec({3}), 2.0) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(conjugate_value(vec({-5, 1}), pot) == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(oracles::grid_conjugate(vec({-5, 1}), 2.0) == doctest::Approx(4.5).epsilon(1e-7));
  // below the threshold the conjugate vanishes
  CHECK(conjugate_value(vec({1.5, -2, 0.3}), pot) == 0.0);

  Rng rng(41);
  for (int s = 0; s < 25; ++s) {
    VectorXd y(3);
    for (int i = 0; i < 3; ++i) y[i] = 4.0 * rng.normal();
    const double lam = s % 2 == 0 ? 0.5 : 2.0;
    CHECK(conjugate_value(y, SparsityPotential(lam)) ==
          doctest::Approx(oracles::grid_conjugate(y, lam)).epsilon(1e-6));
  }
}

TEST_CASE("bregman_distance definition and pairing guard") {
  const SparsityPotential pot(2.0);
  // zero pairing against any target gives phi(target)
  const VectorXd target = vec({1.5, -0.25, 3});
  CHECK(bregman_distance(vec({0, 0, 0}), vec({0, 0, 0}), target, pot) ==
        doctest::Approx(phi_value(target, pot)).epsilon(1e-14));
  // distance to self is zero
  const VectorXd xs = vec({3, -4});
  const VectorXd x = soft_threshold(xs, 2.0);
  CHECK(bregman_distance(xs, x, x, pot) == 0.0);
  // direct evaluation of the definition: phi([2]) - phi([1]) - 3*(2-1) = 0.5,
  // which meets the strong-convexity floor (gamma/2)*|x-y|^2 with equality
  CHECK(bregman_distance(vec({3}), vec({1}), vec({2}), pot) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // invalid pairing is rejected: S_2(3) = 1 != 2
  CHECK_THROWS_AS(bregman_distance(vec({3}), vec({2}), vec({1}), pot), std::invalid_argument);
  CHECK_THROWS_AS(bregman_distance(vec({3}), vec({1, 0}), vec({2}), pot), std::invalid_argument);
}

TEST_CASE("DualPair keeps the primal thresholded") {
  const SparsityPotential pot(1.5);
  const auto pair = DualPair::from_dual(vec({2, -0.5, -3}), pot);
  CHECK(pair.primal == vec({0.5, 0, -1.5}));
}

TEST_CASE("soft_threshold is the gradient of the conjugate") {
  Rng rng(17);
  const double h = 1e-6;
  for (int s = 0; s < 300; ++s) {
    const double lam = (s % 3 == 0) ? 0.0 : (s % 3 == 1 ? 0.5 : 2.0);
    const SparsityPotential pot(lam);
    VectorXd y(4);
    bool near_kink = false;
    for (int i = 0; i < 4; ++i) {
      y[i] = 5.0 * rng.normal();
      if (std::abs(std::abs(y[i]) - lam) < 10 * h) near_kink = true;
    }
    if (near_kink) continue;
    const VectorXd st = soft_threshold(y, lam);
    for (int i = 0; i < 4; ++i) {
      VectorXd yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      const double fd = (conjugate_value(yp, pot) - conjugate_value(ym, pot)) / (2 * h);
      CHECK(std::abs(fd - st[i]) < 1e-5);
    }
  }
}

TEST_CASE("Fenchel-Young holds with equality at the threshold map") {
  Rng rng(23);
  for (int s = 0; s < 2000; ++s) {
    const double lam = (s % 3 == 0) ? 0.0 : (s % 3 == 1 ? 0.5 : 2.0);
    const SparsityPotential pot(lam);
    VectorXd y(5);
    for (int i = 0; i < 5; ++i) y[i] = 6.0 * rng.normal();
    const VectorXd st = soft_threshold(y, lam);
    const double gap = phi_value(st, pot) + conjugate_value(y, pot) - y.dot(st);
    CHECK(std::abs(gap) <= 1e-10);
  }
}

TEST_CASE("bregman_distance is nonnegative on valid pairings") {
  Rng rng(29);
  for (int s = 0; s < 10000; ++s) {
    const double lam = (s % 3 == 0) ? 0.0 : (s % 3 == 1 ? 0.5 : 2.0);
    const SparsityPotential pot(lam);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_below(6));
    VectorXd xs(n), target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      xs[i] = 4.0 * rng.normal();
      target[i] = 4.0 * rng.normal();
    }
    CHECK(bregman_distance(xs, soft_threshold(xs, lam), target, pot) >= 0.0);
  }
}

TEST_CASE("strong-convexity chain on canonical pairings") {
  // (gamma/2)||x-y||^2 <= D(x,y) <= <x*-y*, x-y> <= ||x*-y*|| ||x-y||
  Rng rng(31);
  for (int s = 0; s < 10000; ++s) {
    const double lam = (s % 3 == 0) ? 0.0 : (s % 3 == 1 ? 0.5 : 2.0);
    const SparsityPotential pot(lam);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_below(6));
    VectorXd xs(n), ys(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      xs[i] = 4.0 * rng.normal();
      ys[i] = 4.0 * rng.normal();
    }
    const VectorXd x = soft_threshold(xs, lam);
    const VectorXd y = soft_threshold(ys, lam);
    const double d = bregman_distance(xs, x, y, pot);
    const double inner = (xs - ys).dot(x - y);
    const double outer = (xs - ys).norm() * (x - y).norm();
    CHECK(0.5 * (x - y).squaredNorm() <= d + 1e-9);
    CHECK(d <= inner + 1e-9);
    CHECK(inner <= outer + 1e-9);
  }
}
