#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "sbk/rng.hpp"

namespace sbk {

enum class MatrixKind { gaussian, dct };

/// Distribution of the linear term b^(i) in quadratic systems.
enum class LinTermDist { normal, uniform };

/// Uniform evaluation surface the solvers run against: residual f(x), row
/// gradients grad f_i(x), and column blocks of the Jacobian. Implementations
/// are immutable after construction and safe for concurrent evaluation.
class SystemView {
 public:
  virtual ~SystemView() = default;

  virtual Eigen::Index rows() const = 0;  // m equations
  virtual Eigen::Index cols() const = 0;  // n unknowns

  virtual Eigen::VectorXd residual(const Eigen::VectorXd& x) const = 0;

  /// grad f_i(x), 0-based row index.
  virtual Eigen::VectorXd jacobian_row(Eigen::Index i, const Eigen::VectorXd& x) const = 0;

  /// Columns `block` (strictly increasing, 0-based) of the Jacobian at x,
  /// returned as an m-by-|block| matrix in block order.
  virtual Eigen::MatrixXd jacobian_columns(const std::vector<Eigen::Index>& block,
                                           const Eigen::VectorXd& x) const = 0;

  /// Full Jacobian at x.
  virtual Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

  virtual bool constant_jacobian() const { return false; }

 protected:
  void check_point(const Eigen::VectorXd& x) const;
  void check_row(Eigen::Index i) const;
  void check_block(const std::vector<Eigen::Index>& block) const;
};

/// Quadratic system f_i(x) = 0.5*<x, A^(i) x> + <b^(i), x> + c^(i), with the
/// constants chosen so that f(ground_truth) = 0.
///
/// The generated A^(i) are kept as drawn. Evaluation additionally stores the
/// symmetrized matrices 0.5*(A + A^T), once packed (lower triangle) for the
/// residual quadratic form and row gradients, and once dense-stacked so that
/// Jacobian column blocks read contiguous memory.
class QuadraticSystem final : public SystemView {
 public:
  QuadraticSystem(Eigen::MatrixXd raw_stack, Eigen::MatrixXd lin_terms,
                  Eigen::VectorXd const_terms, Eigen::VectorXd ground_truth,
                  MatrixKind kind, std::vector<Eigen::VectorXd> omegas,
                  std::uint64_t seed, double sparsity);

  Eigen::Index rows() const override { return m_; }
  Eigen::Index cols() const override { return n_; }
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd jacobian_row(Eigen::Index i, const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd jacobian_columns(const std::vector<Eigen::Index>& block,
                                   const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const override;

  /// A^(i) as generated (view into the raw stack).
  Eigen::Block<const Eigen::MatrixXd> matrix(Eigen::Index i) const;
  /// b^(i).
  Eigen::MatrixXd::ConstColXpr lin_term(Eigen::Index i) const { return lins_.col(i); }
  const Eigen::MatrixXd& lin_terms() const { return lins_; }
  const Eigen::VectorXd& const_terms() const { return consts_; }
  const Eigen::VectorXd& ground_truth() const { return truth_; }
  MatrixKind kind() const { return kind_; }
  const std::vector<Eigen::VectorXd>& omegas() const { return omegas_; }
  std::uint64_t seed() const { return seed_; }
  double sparsity() const { return sparsity_; }
  const Eigen::MatrixXd& raw_stack() const { return raw_; }

 private:
  friend QuadraticSystem generate_quadratic_system(Eigen::Index, Eigen::Index, double, MatrixKind,
                                                   std::uint64_t, LinTermDist);

  Eigen::Index m_ = 0, n_ = 0;
  Eigen::MatrixXd raw_;    // (m*n) x n, block i = A^(i)
  Eigen::MatrixXd sym_;    // (m*n) x n, block i = 0.5*(A^(i) + A^(i)^T)
  Eigen::VectorXd packed_; // m * n(n+1)/2, lower triangles of the sym blocks
  Eigen::MatrixXd lins_;   // n x m, column i = b^(i)
  Eigen::VectorXd consts_;
  Eigen::VectorXd truth_;
  MatrixKind kind_ = MatrixKind::gaussian;
  std::vector<Eigen::VectorXd> omegas_;  // dct only, one per equation
  std::uint64_t seed_ = 0;
  double sparsity_ = 0.0;
};

/// Noisy linear sensing system f(x) = A x - b with b = A x_hat + e.
class LinearSystem final : public SystemView {
 public:
  LinearSystem(Eigen::MatrixXd sensing, Eigen::VectorXd rhs, Eigen::VectorXd ground_truth,
               double noise_level, std::uint64_t seed);

  Eigen::Index rows() const override { return sensing_.rows(); }
  Eigen::Index cols() const override { return sensing_.cols(); }
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd jacobian_row(Eigen::Index i, const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd jacobian_columns(const std::vector<Eigen::Index>& block,
                                   const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const override {
    check_point(x);
    return sensing_;
  }
  bool constant_jacobian() const override { return true; }

  const Eigen::MatrixXd& sensing() const { return sensing_; }
  const Eigen::VectorXd& rhs() const { return rhs_; }
  const Eigen::VectorXd& ground_truth() const { return truth_; }
  double noise_level() const { return noise_level_; }
  std::uint64_t seed() const { return seed_; }

 private:
  Eigen::MatrixXd sensing_;
  Eigen::VectorXd rhs_;
  Eigen::VectorXd truth_;
  double noise_level_ = 0.0;
  std::uint64_t seed_ = 0;
};

/// Sparse signal with exactly round(sp*n) nonzero entries on a uniformly
/// random support, values standard normal (sprandn-style, deterministic).
Eigen::VectorXd generate_sparse_signal(Eigen::Index n, double sp, Rng& rng);
Eigen::VectorXd generate_sparse_signal(Eigen::Index n, double sp, std::uint64_t seed);

QuadraticSystem generate_quadratic_system(Eigen::Index m, Eigen::Index n, double sp,
                                          MatrixKind kind, std::uint64_t seed,
                                          LinTermDist lin_dist = LinTermDist::normal);

/// A has iid uniform[0,1] entries; e is Gaussian rescaled so that
/// ||e|| = noise_level * ||A x_hat||; b = A x_hat + e.
LinearSystem generate_linear_sensing(Eigen::Index m, Eigen::Index n,
                                     const Eigen::VectorXd& signal, double noise_level,
                                     std::uint64_t seed);

}  // namespace sbk
