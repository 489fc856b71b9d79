#include "udesign/linalg.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <vector>

namespace udesign {

namespace {

std::atomic<std::size_t> g_dim_cap{0};  // 0 = not initialized

std::size_t read_env_cap() {
  if (const char* s = std::getenv("UDESIGN_DIM_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && v > 0) return static_cast<std::size_t>(v);
  }
  return 8192;
}

}  // namespace

std::size_t dense_dim_cap() {
  std::size_t c = g_dim_cap.load(std::memory_order_relaxed);
  if (c == 0) {
    c = read_env_cap();
    g_dim_cap.store(c, std::memory_order_relaxed);
  }
  return c;
}

void set_dense_dim_cap(std::size_t cap) {
  g_dim_cap.store(cap == 0 ? read_env_cap() : cap, std::memory_order_relaxed);
}

std::size_t checked_pow(std::size_t base, unsigned exp) {
  std::size_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base)
      throw ConfigError("checked_pow: overflow computing " + std::to_string(base) +
                        "^" + std::to_string(exp));
    r *= base;
  }
  return r;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat tensor_power(const CMat& u, unsigned t, std::size_t cap) {
  if (u.rows() != u.cols()) throw ConfigError("tensor_power: matrix must be square");
  if (cap == 0) cap = dense_dim_cap();
  const std::size_t dim = checked_pow(static_cast<std::size_t>(u.rows()), t);
  if (dim > cap)
    throw BudgetError("tensor_power: dimension " + std::to_string(dim) +
                      " exceeds cap " + std::to_string(cap));
  CMat r = CMat::Identity(1, 1);
  for (unsigned i = 0; i < t; ++i) r = kron(r, u);
  return r;
}

CMat tensor_power_conj(const CMat& u, unsigned t, std::size_t cap) {
  if (u.rows() != u.cols()) throw ConfigError("tensor_power_conj: matrix must be square");
  if (cap == 0) cap = dense_dim_cap();
  const std::size_t dim = checked_pow(static_cast<std::size_t>(u.rows()), 2 * t);
  if (dim > cap)
    throw BudgetError("tensor_power_conj: dimension " + std::to_string(dim) +
                      " exceeds cap " + std::to_string(cap));
  CMat fwd = tensor_power(u, t, cap);
  CMat bwd = fwd.conjugate();
  return kron(fwd, bwd);
}

double max_abs(const CMat& m) {
  double v = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v = std::max(v, std::abs(m(i, j)));
  return v;
}

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, max_abs(m));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol * scale) return false;
  return true;
}

bool is_unitary(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  CMat g = m.adjoint() * m;
  g -= CMat::Identity(m.rows(), m.cols());
  return max_abs(g) <= tol;
}

RVec eigenvalues_hermitian(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("eigenvalues_hermitian: eigensolver did not converge");
  return es.eigenvalues();
}

namespace {

// Deterministic pseudo-random start vector (fixed linear-congruential walk;
// independent of the RandomSource module so norm results never depend on
// caller seeding).
CVec lanczos_start(Eigen::Index n) {
  CVec v(n);
  std::uint64_t s = 0x9E3779B97F4A7C15ULL;
  for (Eigen::Index i = 0; i < n; ++i) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    const double re = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    const double im = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
    v[i] = cplx(re, im);
  }
  v.normalize();
  return v;
}

// Extreme |eigenvalue| of the symmetric tridiagonal (alpha, beta), together
// with the |last component| of the corresponding eigenvector (residual info).
void tridiag_extreme(const std::vector<double>& alpha, const std::vector<double>& beta,
                     double* theta, double* tail) {
  const int m = static_cast<int>(alpha.size());
  RMat tmat = RMat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    tmat(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) {
      tmat(i, i + 1) = beta[static_cast<std::size_t>(i)];
      tmat(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(tmat);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("lanczos: tridiagonal eigensolve failed");
  int best = 0;
  for (int i = 1; i < m; ++i)
    if (std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[best])) best = i;
  *theta = std::abs(es.eigenvalues()[best]);
  *tail = std::abs(es.eigenvectors()(m - 1, best));
}

}  // namespace

double operator_norm_hermitian(const std::function<void(const CVec&, CVec&)>& apply,
                               Eigen::Index dim, double tol, int max_iter) {
  if (dim <= 0) throw ConfigError("operator_norm_hermitian: empty operator");
  const int mmax = static_cast<int>(std::min<Eigen::Index>(dim, max_iter));

  std::vector<CVec> basis;  // full reorthogonalization
  std::vector<double> alpha, beta;
  basis.push_back(lanczos_start(dim));
  CVec w(dim);

  for (int j = 0; j < mmax; ++j) {
    apply(basis[static_cast<std::size_t>(j)], w);
    cplx a = basis[static_cast<std::size_t>(j)].dot(w);
    alpha.push_back(a.real());
    w -= a * basis[static_cast<std::size_t>(j)];
    if (j > 0) w -= cplx(beta[static_cast<std::size_t>(j - 1)], 0.0) * basis[static_cast<std::size_t>(j - 1)];
    // two passes of reorthogonalization keep the basis clean
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& q : basis) w -= q.dot(w) * q;

    const double b = w.norm();
    double theta = 0.0, tail = 0.0;
    tridiag_extreme(alpha, beta, &theta, &tail);
    const double resid = b * tail;
    if (resid <= tol * std::max(theta, 1e-30) || b <= 1e-14 * std::max(theta, 1.0)) {
      return theta;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  // Krylov space exhausted the whole dimension: the tridiagonal is exact.
  if (mmax == static_cast<int>(dim)) {
    double theta = 0.0, tail = 0.0;
    tridiag_extreme(alpha, beta, &theta, &tail);
    return theta;
  }
  throw ConvergenceError("operator_norm_hermitian: no convergence after " +
                         std::to_string(mmax) + " Lanczos steps");
}

namespace {

constexpr Eigen::Index kDenseEigLimit = 3072;

double norm_hermitian_dense(const CMat& m, double tol) {
  if (m.rows() <= kDenseEigLimit) {
    RVec ev = eigenvalues_hermitian(m);
    return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  }
  auto apply = [&m](const CVec& x, CVec& y) { y.noalias() = m * x; };
  return operator_norm_hermitian(apply, m.rows(), tol);
}

}  // namespace

double operator_norm(const CMat& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() == m.cols() && is_hermitian(m)) return norm_hermitian_dense(m, tol);
  // General case: largest eigenvalue of M^dagger M.
  if (std::max(m.rows(), m.cols()) <= kDenseEigLimit) {
    CMat g = m.adjoint() * m;
    RVec ev = eigenvalues_hermitian(g);
    return std::sqrt(std::max(0.0, ev[ev.size() - 1]));
  }
  auto apply = [&m](const CVec& x, CVec& y) {
    CVec mid = m * x;
    y.noalias() = m.adjoint() * mid;
  };
  return std::sqrt(std::max(0.0, operator_norm_hermitian(apply, m.cols(), tol)));
}

void fwht(CVec& v) {
  const Eigen::Index n = v.size();
  if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("fwht: length must be a power of two");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index h = 1; h < n; h <<= 1) {
    for (Eigen::Index i = 0; i < n; i += h << 1) {
      for (Eigen::Index j = i; j < i + h; ++j) {
        const cplx x = v[j], y = v[j + h];
        v[j] = (x + y) * inv_sqrt2;
        v[j + h] = (x - y) * inv_sqrt2;
      }
    }
  }
}

void fwht_columns(CMat& m) {
  const Eigen::Index n = m.rows();
  if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("fwht_columns: rows must be a power of two");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index h = 1; h < n; h <<= 1)
    for (Eigen::Index i = 0; i < n; i += h << 1)
      for (Eigen::Index j = i; j < i + h; ++j) {
        // whole-row butterflies keep the row-major access pattern contiguous
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          const cplx x = m(j, c), y = m(j + h, c);
          m(j, c) = (x + y) * inv_sqrt2;
          m(j + h, c) = (x - y) * inv_sqrt2;
        }
      }
}

void fwht_rows(CMat& m) {
  const Eigen::Index n = m.cols();
  if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("fwht_rows: cols must be a power of two");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index h = 1; h < n; h <<= 1)
      for (Eigen::Index i = 0; i < n; i += h << 1)
        for (Eigen::Index j = i; j < i + h; ++j) {
          const cplx x = m(r, j), y = m(r, j + h);
          m(r, j) = (x + y) * inv_sqrt2;
          m(r, j + h) = (x - y) * inv_sqrt2;
        }
}

}  // namespace udesign
