#include "udesign/moment_ops.hpp"

#include <algorithm>
#include <cmath>

#include "udesign/parallel.hpp"

namespace udesign {

std::size_t encode_index(const MultiIndex& k, std::size_t d) {
  std::size_t code = 0;
  for (std::uint32_t v : k) code = code * d + v;
  return code;
}

MultiIndex decode_index(std::size_t code, std::size_t d, unsigned t) {
  MultiIndex k(t);
  for (unsigned s = t; s-- > 0;) {
    k[s] = static_cast<std::uint32_t>(code % d);
    code /= d;
  }
  return k;
}

MultiIndex apply_perm(const MultiIndex& k, const Perm& p) {
  MultiIndex r(k.size());
  for (std::size_t s = 0; s < k.size(); ++s) r[s] = k[p[s]];
  return r;
}

bool same_multiset(MultiIndex a, MultiIndex b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::size_t MomentOperator::dim() const {
  return kind == Kind::kDense ? static_cast<std::size_t>(dense.rows()) : diag.size();
}

CMat MomentOperator::to_dense() const {
  if (kind == Kind::kDense) return dense;
  const std::size_t n = diag.size();
  if (n > dense_dim_cap())
    throw BudgetError("MomentOperator::to_dense: dimension " + std::to_string(n) +
                      " exceeds the dense cap");
  CMat m = CMat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    if (diag[i]) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return m;
}

double MomentOperator::trace_real() const {
  if (kind == Kind::kDense) return dense.trace().real();
  double tr = 0.0;
  for (std::uint8_t v : diag) tr += v;
  return tr;
}

RMat perm_gram(std::size_t d, const std::vector<Perm>& perms) {
  const auto n = static_cast<Eigen::Index>(perms.size());
  const auto t = static_cast<int>(perms.empty() ? 0 : perms[0].size());
  RMat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const unsigned c = cycle_count(compose(perms[i], inverse_perm(perms[j])));
      g(i, j) = std::pow(static_cast<double>(d), static_cast<int>(c) - t);
    }
  return g;
}

RMat pinv_sym(const RMat& g, double rel_cutoff) {
  Eigen::SelfAdjointEigenSolver<RMat> es(g);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("pinv_sym: eigensolver failed");
  const RVec& ev = es.eigenvalues();
  const double cutoff = rel_cutoff * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  RVec inv = RVec::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cutoff) inv(i) = 1.0 / ev(i);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

MomentOperator projector_p0(std::size_t d, unsigned t) {
  const std::size_t dt = checked_pow(d, t);
  const std::size_t dim = checked_pow(d, 2 * t);
  if (dim > dense_dim_cap())
    throw BudgetError("projector_p0: dimension " + std::to_string(dim) +
                      " exceeds the dense cap");
  const auto perms = all_permutations(t);
  const RMat gplus = pinv_sym(perm_gram(d, perms));

  // images enc(m_pi) for every label m and permutation pi
  std::vector<std::vector<std::size_t>> image(perms.size(),
                                              std::vector<std::size_t>(dt));
  for (std::size_t m = 0; m < dt; ++m) {
    const MultiIndex mi = decode_index(m, d, t);
    for (std::size_t p = 0; p < perms.size(); ++p)
      image[p][m] = encode_index(apply_perm(mi, perms[p]), d);
  }

  MomentOperator out;
  out.kind = MomentOperator::Kind::kDense;
  out.d = d;
  out.t = t;
  out.dense = CMat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const double scale = 1.0 / static_cast<double>(dt);
  for (std::size_t p = 0; p < perms.size(); ++p)
    for (std::size_t q = 0; q < perms.size(); ++q) {
      const double w = gplus(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) * scale;
      if (w == 0.0) continue;
      for (std::size_t m = 0; m < dt; ++m)
        for (std::size_t n = 0; n < dt; ++n)
          out.dense(static_cast<Eigen::Index>(m * dt + image[p][m]),
                    static_cast<Eigen::Index>(n * dt + image[q][n])) += w;
    }
  return out;
}

MomentOperator projector_diag(std::size_t d, unsigned t) {
  const std::size_t dt = checked_pow(d, t);
  const std::size_t dim = checked_pow(d, 2 * t);
  if (dim > (std::size_t{1} << 26))
    throw BudgetError("projector_diag: label space " + std::to_string(dim) +
                      " exceeds the indicator budget");
  // canonical multiset key per label
  std::vector<std::size_t> key(dt);
  for (std::size_t m = 0; m < dt; ++m) {
    MultiIndex mi = decode_index(m, d, t);
    std::sort(mi.begin(), mi.end());
    key[m] = encode_index(mi, d);
  }
  MomentOperator out;
  out.kind = MomentOperator::Kind::kDiagonal;
  out.d = d;
  out.t = t;
  out.diag.assign(dim, 0);
  for (std::size_t k = 0; k < dt; ++k)
    for (std::size_t l = 0; l < dt; ++l)
      out.diag[k * dt + l] = (key[k] == key[l]) ? 1 : 0;
  return out;
}

CMat basis_pair_projector(const CMat& b, unsigned t) {
  const auto d = static_cast<std::size_t>(b.rows());
  const MomentOperator ind = projector_diag(d, t);
  const CMat w = tensor_power_conj(b, t);
  CMat scaled = w;
  for (Eigen::Index c = 0; c < scaled.cols(); ++c)
    if (!ind.diag[static_cast<std::size_t>(c)]) scaled.col(c).setZero();
  return scaled * w.adjoint();
}

CMat mc_average_moment(std::size_t d, unsigned t, std::size_t samples,
                       std::uint64_t seed, unsigned threads,
                       const std::function<CMat(std::size_t, RandomSource&)>& draw) {
  if (samples == 0) throw ConfigError("mc_average_moment: need at least one sample");
  const std::size_t dim = checked_pow(d, 2 * t);
  if (dim > dense_dim_cap())
    throw BudgetError("mc_average_moment: dimension " + std::to_string(dim) +
                      " exceeds the dense cap");
  constexpr std::size_t kChunk = 250;
  const std::size_t nchunks = (samples + kChunk - 1) / kChunk;

  ThreadPool pool(threads);
  CMat total = CMat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  // waves keep memory bounded; the reduction order is ascending chunk index
  // regardless of wave size, so results do not depend on the thread count
  const std::size_t wave = std::max<std::size_t>(std::size_t{4} * pool.size(), 8);
  std::vector<CMat> partial(std::min(wave, nchunks));
  for (std::size_t base = 0; base < nchunks; base += wave) {
    const std::size_t count = std::min(wave, nchunks - base);
    pool.run_indexed(count, [&](std::size_t j) {
      const std::size_t chunk = base + j;
      const std::size_t lo = chunk * kChunk;
      const std::size_t hi = std::min(lo + kChunk, samples);
      RandomSource rng = RandomSource(seed).substream(chunk);
      CMat acc = CMat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      for (std::size_t s = lo; s < hi; ++s) {
        const CMat u = draw(s, rng);
        acc += tensor_power_conj(u, t);
      }
      partial[j] = std::move(acc);
    });
    for (std::size_t j = 0; j < count; ++j) total += partial[j];
  }
  return total / static_cast<double>(samples);
}

CMat random_diagonal_unitary(std::size_t d, RandomSource& rng) {
  CMat u = CMat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i)
    u(i, i) = std::polar(1.0, 2.0 * M_PI * rng.uniform());
  return u;
}

CMat mc_haar_moment(std::size_t d, unsigned t, std::size_t samples,
                    std::uint64_t seed, unsigned threads) {
  return mc_average_moment(d, t, samples, seed, threads,
                           [d](std::size_t, RandomSource& rng) {
                             return haar_unitary(d, rng);
                           });
}

CMat mc_diagonal_moment(std::size_t d, unsigned t, std::size_t samples,
                        std::uint64_t seed, unsigned threads) {
  return mc_average_moment(d, t, samples, seed, threads,
                           [d](std::size_t, RandomSource& rng) {
                             return random_diagonal_unitary(d, rng);
                           });
}

CMat mc_sandwich_moment(const FourierTypePair& pair, unsigned t,
                        std::size_t samples, std::uint64_t seed, unsigned threads) {
  const std::size_t d = pair.d();
  const CMat& f = pair.matrix();
  return mc_average_moment(d, t, samples, seed, threads,
                           [d, &f](std::size_t, RandomSource& rng) {
                             const CMat de = random_diagonal_unitary(d, rng);
                             const CMat df = random_diagonal_unitary(d, rng);
                             const CMat de2 = random_diagonal_unitary(d, rng);
                             return CMat(de * f * df * f.adjoint() * de2);
                           });
}

}  // namespace udesign
