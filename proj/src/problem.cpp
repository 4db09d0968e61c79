#include "sbk/problem.hpp"

#include <cmath>
#include <stdexcept>

#if defined(__linux__)
#include <sys/mman.h>
#endif

namespace sbk {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline Eigen::Index packed_len(Eigen::Index n) { return n * (n + 1) / 2; }

using PackedView = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Packed weights of the outer product x x^T, matching the lower-triangle
// layout: w[jj] = x_j^2 and w[rj] = 2 x_r x_j, so that the quadratic forms
// x' A_s^(i) x for all i become one (m x plen) matrix-vector product.
void fill_outer_weights(const double* x, double* w, Eigen::Index n) {
  for (Eigen::Index j = 0; j < n; ++j) {
    const double xj = x[j];
    *w++ = xj * xj;
    const double tx = 2.0 * xj;
    for (Eigen::Index r = j + 1; r < n; ++r) *w++ = tx * x[r];
  }
}

// y = P x for a packed lower-triangular symmetric matrix.
void packed_symv(const double* p, const double* x, double* y, Eigen::Index n) {
  for (Eigen::Index j = 0; j < n; ++j) y[j] = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index len = n - j - 1;
    const double xj = x[j];
    double acc = p[0] * xj;
    if (len > 0) {
      Eigen::Map<const Eigen::VectorXd> col(p + 1, len);
      acc += col.dot(Eigen::Map<const Eigen::VectorXd>(x + j + 1, len));
      Eigen::Map<Eigen::VectorXd>(y + j + 1, len) += xj * col;
    }
    y[j] += acc;
    p += len + 1;
  }
}

void advise_huge(const Eigen::MatrixXd& mat) {
#if defined(__linux__)
  madvise(const_cast<double*>(mat.data()), sizeof(double) * static_cast<std::size_t>(mat.size()),
          MADV_HUGEPAGE);
#else
  (void)mat;
#endif
}

void advise_huge(const Eigen::VectorXd& vec) {
#if defined(__linux__)
  madvise(const_cast<double*>(vec.data()), sizeof(double) * static_cast<std::size_t>(vec.size()),
          MADV_HUGEPAGE);
#else
  (void)vec;
#endif
}

}  // namespace

Eigen::MatrixXd SystemView::jacobian(const Eigen::VectorXd& x) const {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(cols()));
  for (Eigen::Index j = 0; j < cols(); ++j) all[static_cast<std::size_t>(j)] = j;
  return jacobian_columns(all, x);
}

void SystemView::check_point(const Eigen::VectorXd& x) const {
  if (x.size() != cols()) throw std::invalid_argument("SystemView: point has wrong dimension");
}

void SystemView::check_row(Eigen::Index i) const {
  if (i < 0 || i >= rows()) throw std::out_of_range("SystemView: row index out of range");
}

void SystemView::check_block(const std::vector<Eigen::Index>& block) const {
  if (block.empty()) throw std::invalid_argument("SystemView: empty column block");
  Eigen::Index prev = -1;
  for (Eigen::Index j : block) {
    if (j <= prev || j >= cols())
      throw std::invalid_argument("SystemView: block indices must be strictly increasing and in range");
    prev = j;
  }
}

QuadraticSystem::QuadraticSystem(Eigen::MatrixXd raw_stack, Eigen::MatrixXd lin_terms,
                                 Eigen::VectorXd const_terms, Eigen::VectorXd ground_truth,
                                 MatrixKind kind, std::vector<Eigen::VectorXd> omegas,
                                 std::uint64_t seed, double sparsity)
    : raw_(std::move(raw_stack)),
      lins_(std::move(lin_terms)),
      consts_(std::move(const_terms)),
      truth_(std::move(ground_truth)),
      kind_(kind),
      omegas_(std::move(omegas)),
      seed_(seed),
      sparsity_(sparsity) {
  n_ = raw_.cols();
  if (n_ <= 0 || raw_.rows() % n_ != 0)
    throw std::invalid_argument("QuadraticSystem: raw stack must be (m*n) x n");
  m_ = raw_.rows() / n_;
  if (lins_.rows() != n_ || lins_.cols() != m_ || consts_.size() != m_ || truth_.size() != n_)
    throw std::invalid_argument("QuadraticSystem: inconsistent dimensions");
  if (kind_ == MatrixKind::dct && static_cast<Eigen::Index>(omegas_.size()) != m_)
    throw std::invalid_argument("QuadraticSystem: dct kind requires one omega per equation");

  sym_.resize(m_ * n_, n_);
  packed_.resize(m_ * packed_len(n_));
  advise_huge(sym_);
  advise_huge(packed_);
  advise_huge(raw_);
  double* p = packed_.data();
  for (Eigen::Index i = 0; i < m_; ++i) {
    auto a = raw_.middleRows(i * n_, n_);
    auto s = sym_.middleRows(i * n_, n_);
    s = 0.5 * (a + a.transpose());
    for (Eigen::Index j = 0; j < n_; ++j)
      for (Eigen::Index r = j; r < n_; ++r) *p++ = s(r, j);
  }
}

Eigen::Block<const Eigen::MatrixXd> QuadraticSystem::matrix(Eigen::Index i) const {
  check_row(i);
  return raw_.middleRows(i * n_, n_);
}

Eigen::VectorXd QuadraticSystem::residual(const Eigen::VectorXd& x) const {
  check_point(x);
  const Eigen::Index plen = packed_len(n_);
  // reused per thread: the solvers call this once per iteration
  thread_local Eigen::VectorXd w;
  if (w.size() != plen) w.resize(plen);
  fill_outer_weights(x.data(), w.data(), n_);
  Eigen::VectorXd f(m_);
  f.noalias() = PackedView(packed_.data(), m_, plen) * w;
  f *= 0.5;
  f.noalias() += lins_.transpose() * x;
  f += consts_;
  return f;
}

Eigen::VectorXd QuadraticSystem::jacobian_row(Eigen::Index i, const Eigen::VectorXd& x) const {
  check_row(i);
  check_point(x);
  Eigen::VectorXd g(n_);
  packed_symv(packed_.data() + i * packed_len(n_), x.data(), g.data(), n_);
  g += lins_.col(i);
  return g;
}

Eigen::MatrixXd QuadraticSystem::jacobian_columns(const std::vector<Eigen::Index>& block,
                                                  const Eigen::VectorXd& x) const {
  check_block(block);
  check_point(x);
  Eigen::MatrixXd out(m_, static_cast<Eigen::Index>(block.size()));
  // walk each stacked column top to bottom so the reads stay sequential
  for (std::size_t k = 0; k < block.size(); ++k) {
    const Eigen::Index j = block[k];
    const auto col = sym_.col(j);
    for (Eigen::Index i = 0; i < m_; ++i)
      out(i, static_cast<Eigen::Index>(k)) = col.segment(i * n_, n_).dot(x) + lins_(j, i);
  }
  return out;
}

Eigen::MatrixXd QuadraticSystem::jacobian(const Eigen::VectorXd& x) const {
  check_point(x);
  Eigen::VectorXd stacked = sym_ * x;  // all grad rows in one pass
  Eigen::MatrixXd jac(m_, n_);
  for (Eigen::Index i = 0; i < m_; ++i)
    jac.row(i) = stacked.segment(i * n_, n_).transpose() + lins_.col(i).transpose();
  return jac;
}

LinearSystem::LinearSystem(Eigen::MatrixXd sensing, Eigen::VectorXd rhs,
                           Eigen::VectorXd ground_truth, double noise_level, std::uint64_t seed)
    : sensing_(std::move(sensing)),
      rhs_(std::move(rhs)),
      truth_(std::move(ground_truth)),
      noise_level_(noise_level),
      seed_(seed) {
  if (sensing_.rows() != rhs_.size() || sensing_.cols() != truth_.size())
    throw std::invalid_argument("LinearSystem: inconsistent dimensions");
  if (!(noise_level_ >= 0.0)) throw std::invalid_argument("LinearSystem: noise level must be >= 0");
}

Eigen::VectorXd LinearSystem::residual(const Eigen::VectorXd& x) const {
  check_point(x);
  return sensing_ * x - rhs_;
}

Eigen::VectorXd LinearSystem::jacobian_row(Eigen::Index i, const Eigen::VectorXd& x) const {
  check_row(i);
  check_point(x);
  return sensing_.row(i).transpose();
}

Eigen::MatrixXd LinearSystem::jacobian_columns(const std::vector<Eigen::Index>& block,
                                               const Eigen::VectorXd& x) const {
  check_block(block);
  check_point(x);
  Eigen::MatrixXd out(sensing_.rows(), static_cast<Eigen::Index>(block.size()));
  for (std::size_t k = 0; k < block.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = sensing_.col(block[k]);
  return out;
}

Eigen::VectorXd generate_sparse_signal(Eigen::Index n, double sp, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("generate_sparse_signal: n must be positive");
  if (!(sp > 0.0 && sp <= 1.0)) throw std::invalid_argument("generate_sparse_signal: sp must be in (0,1]");
  const auto k = static_cast<Eigen::Index>(std::llround(sp * static_cast<double>(n)));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  // partial Fisher-Yates picks the support uniformly without replacement
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::size_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    out[idx[static_cast<std::size_t>(i)]] = rng.normal();
  }
  return out;
}

Eigen::VectorXd generate_sparse_signal(Eigen::Index n, double sp, std::uint64_t seed) {
  Rng rng(seed);
  return generate_sparse_signal(n, sp, rng);
}

QuadraticSystem generate_quadratic_system(Eigen::Index m, Eigen::Index n, double sp,
                                          MatrixKind kind, std::uint64_t seed,
                                          LinTermDist lin_dist) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("generate_quadratic_system: m, n must be positive");

  // independent sub-streams so each ingredient is reproducible on its own
  Rng sig_rng(mix_seed(seed, 1));
  Rng mat_rng(mix_seed(seed, 2));
  Rng lin_rng(mix_seed(seed, 3));

  Eigen::VectorXd truth = generate_sparse_signal(n, sp, sig_rng);

  Eigen::MatrixXd raw(m * n, n);
  std::vector<Eigen::VectorXd> omegas;
  if (kind == MatrixKind::gaussian) {
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index r = 0; r < n; ++r) raw(i * n + r, j) = mat_rng.normal();
  } else {
    omegas.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::VectorXd omega(n);
      for (Eigen::Index r = 0; r < n; ++r) omega[r] = mat_rng.uniform01();
      for (Eigen::Index j = 0; j < n; ++j)
        raw.block(i * n, j, n, 1) = (kTwoPi * static_cast<double>(j) * omega.array()).cos();
      omegas.push_back(std::move(omega));
    }
  }

  Eigen::MatrixXd lins(n, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index r = 0; r < n; ++r)
      lins(r, i) = lin_dist == LinTermDist::normal ? lin_rng.normal() : lin_rng.uniform01();

  // zero constants first, then set c = -(0.5<x,Ax> + <b,x>) at the truth so the
  // same evaluation kernel returns exactly zero there
  QuadraticSystem sys(std::move(raw), std::move(lins), Eigen::VectorXd::Zero(m), truth, kind,
                      std::move(omegas), seed, sp);
  sys.consts_ = -sys.residual(truth);
  return sys;
}

LinearSystem generate_linear_sensing(Eigen::Index m, Eigen::Index n, const Eigen::VectorXd& signal,
                                     double noise_level, std::uint64_t seed) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("generate_linear_sensing: m, n must be positive");
  if (signal.size() != n) throw std::invalid_argument("generate_linear_sensing: signal length != n");
  if (!(noise_level >= 0.0)) throw std::invalid_argument("generate_linear_sensing: noise level must be >= 0");

  Rng mat_rng(mix_seed(seed, 1));
  Rng noise_rng(mix_seed(seed, 2));

  Eigen::MatrixXd sensing(m, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < m; ++i) sensing(i, j) = mat_rng.uniform01();

  const Eigen::VectorXd clean = sensing * signal;
  Eigen::VectorXd rhs = clean;
  if (noise_level > 0.0) {
    Eigen::VectorXd e(m);
    for (Eigen::Index i = 0; i < m; ++i) e[i] = noise_rng.normal();
    const double en = e.norm();
    if (en > 0.0) rhs += (noise_level * clean.norm() / en) * e;
  }
  return LinearSystem(std::move(sensing), std::move(rhs), signal, noise_level, seed);
}

}  // namespace sbk
