#include "udesign/tpe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "udesign/parallel.hpp"

namespace udesign {

namespace {

constexpr std::size_t kCompressedBudget = 10000;

long long ipow_ll(std::size_t base, unsigned exp) {
  long long r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= static_cast<long long>(base);
  return r;
}

// rounds values that sit within atol of an integer (guards against ulp noise
// pushing a ceil to the next integer)
unsigned long safe_ceil(double v, double atol = 1e-9) {
  const double r = std::round(v);
  if (std::abs(v - r) < atol) return static_cast<unsigned long>(std::max(r, 1.0));
  return static_cast<unsigned long>(std::max(std::ceil(v), 1.0));
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> multiset_pair_basis(std::size_t d,
                                                                     unsigned t) {
  const std::size_t dt = checked_pow(d, t);
  if (dt > kCompressedBudget)
    throw BudgetError("multiset_pair_basis: label count " + std::to_string(dt) +
                      " exceeds the compressed budget");
  // bucket labels by their sorted symbol tuple
  std::map<std::size_t, std::vector<std::size_t>> orbit;
  for (std::size_t m = 0; m < dt; ++m) {
    MultiIndex mi = decode_index(m, d, t);
    std::sort(mi.begin(), mi.end());
    orbit[encode_index(mi, d)].push_back(m);
  }
  std::size_t total = 0;
  for (const auto& [key, members] : orbit) total += members.size() * members.size();
  if (total > kCompressedBudget)
    throw BudgetError("multiset_pair_basis: subspace dimension " +
                      std::to_string(total) + " exceeds the compressed budget");

  std::vector<std::pair<std::size_t, std::size_t>> basis;
  basis.reserve(total);
  std::vector<std::size_t> key_of(dt);
  for (const auto& [key, members] : orbit)
    for (std::size_t m : members) key_of[m] = key;
  for (std::size_t k = 0; k < dt; ++k)
    for (std::size_t l : orbit[key_of[k]]) basis.emplace_back(k, l);
  return basis;
}

RMat compressed_pf(const FourierTypePair& pair, unsigned t, unsigned threads) {
  const std::size_t d = pair.d();
  const auto basis = multiset_pair_basis(d, t);
  const auto nb = static_cast<Eigen::Index>(basis.size());

  const auto perms = all_permutations(t);
  const auto partitions = set_partitions(t);

  // integer numerators c(Q) * L * d^{|Q|} over the common denominator L
  long long denom_lcm = 1;
  std::vector<Rat> cq(partitions.size());
  for (std::size_t q = 0; q < partitions.size(); ++q) {
    Rat c(1);
    for (const auto& block : partitions[q])
      c *= partition_weight(static_cast<unsigned>(block.size()));
    cq[q] = c;
    denom_lcm = std::lcm(denom_lcm, c.denominator());
  }
  std::vector<long long> qnum(partitions.size());
  for (std::size_t q = 0; q < partitions.size(); ++q) {
    const Rat scaled = cq[q] * Rat(denom_lcm) * Rat(ipow_ll(d, static_cast<unsigned>(partitions[q].size())));
    qnum[q] = boost::rational_cast<long long>(scaled);
  }
  const double entry_denom =
      static_cast<double>(denom_lcm) * std::pow(static_cast<double>(d), 2.0 * t);

  // decoded tuples once per basis element
  std::vector<MultiIndex> kt(basis.size()), lt(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    kt[i] = decode_index(basis[i].first, d, t);
    lt[i] = decode_index(basis[i].second, d, t);
  }

  RMat out(nb, nb);
  ThreadPool pool(threads);
  pool.run_indexed(static_cast<std::size_t>(nb), [&](std::size_t i) {
    std::vector<std::uint32_t> u(t), v(t), w(t);
    for (std::size_t j = 0; j <= i; ++j) {
      for (unsigned s = 0; s < t; ++s) {
        u[s] = pair.sub(kt[i][s], kt[j][s]);
        v[s] = pair.sub(lt[i][s], lt[j][s]);
      }
      long long num = 0;
      for (const auto& p : perms) {
        for (unsigned s = 0; s < t; ++s) w[s] = pair.sub(u[s], v[p[s]]);
        for (std::size_t q = 0; q < partitions.size(); ++q) {
          bool all_zero = true;
          for (const auto& block : partitions[q]) {
            std::uint32_t acc = 0;
            for (std::uint8_t s : block) acc = pair.add(acc, w[s]);
            if (acc != 0) {
              all_zero = false;
              break;
            }
          }
          if (all_zero) num += qnum[q];
        }
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(num) / entry_denom;
    }
  });
  // mirror the strictly-lower triangle
  for (Eigen::Index i = 0; i < nb; ++i)
    for (Eigen::Index j = i + 1; j < nb; ++j) out(i, j) = out(j, i);
  return out;
}

RMat compressed_p0(std::size_t d, unsigned t) {
  const auto basis = multiset_pair_basis(d, t);
  const auto nb = static_cast<Eigen::Index>(basis.size());
  const auto perms = all_permutations(t);
  const RMat gplus = pinv_sym(perm_gram(d, perms));
  const double scale = 1.0 / static_cast<double>(checked_pow(d, t));

  // permutations mapping k to l, per basis element
  std::vector<std::vector<std::size_t>> fixers(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const MultiIndex k = decode_index(basis[i].first, d, t);
    const MultiIndex l = decode_index(basis[i].second, d, t);
    for (std::size_t p = 0; p < perms.size(); ++p)
      if (apply_perm(k, perms[p]) == l) fixers[i].push_back(p);
  }

  RMat out(nb, nb);
  for (Eigen::Index i = 0; i < nb; ++i)
    for (Eigen::Index j = 0; j < nb; ++j) {
      double acc = 0.0;
      for (std::size_t p : fixers[static_cast<std::size_t>(i)])
        for (std::size_t q : fixers[static_cast<std::size_t>(j)])
          acc += gplus(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      out(i, j) = acc * scale;
    }
  return out;
}

EtaResult tpe_eta(const FourierTypePair& pair, unsigned t, unsigned threads) {
  if (t == 0) throw ConfigError("tpe_eta: order must be positive");
  const PairReport rep = verify_pair(pair);
  if (!rep.pass())
    throw ConfigError("tpe_eta: basis pair fails Fourier-type verification");

  const RMat mf = compressed_pf(pair, t, threads);
  const RMat m0 = compressed_p0(pair.d(), t);
  const RMat diff = mf - m0;

  EtaResult res;
  res.compressed_dim = static_cast<std::size_t>(diff.rows());
  if (diff.cwiseAbs().maxCoeff() == 0.0) {
    res.eta = 0.0;
  } else {
    res.eta = operator_norm_hermitian(
        [&diff](const CVec& in, CVec& out) {
          const RVec re = in.real();
          const RVec im = in.imag();
          out.resize(in.size());
          out.real() = diff * re;
          out.imag() = diff * im;
        },
        diff.rows());
  }

  double tfact = 1.0;
  for (unsigned i = 2; i <= t; ++i) tfact *= i;
  const double tt = static_cast<double>(t) * t;
  const double bound = ((1.0 + tt) * tfact * tfact + tt) / static_cast<double>(pair.d());
  if (bound < 1.0) res.bound = bound;
  return res;
}

unsigned long tpe_iterations(double eta, std::size_t d, unsigned t, double eps) {
  if (d < 2) throw ConfigError("tpe_iterations: dimension must be at least 2");
  if (t == 0) throw ConfigError("tpe_iterations: order must be positive");
  if (!(eps > 0.0) || eps > 1.0)
    throw ConfigError("tpe_iterations: eps must lie in (0, 1]");
  if (eta >= 1.0)
    throw ConfigError("tpe_iterations: vacuous gap (eta >= 1 certifies nothing)");
  if (eta <= 0.0) throw ConfigError("tpe_iterations: eta must lie in (0, 1)");
  const double v = (t * std::log(static_cast<double>(d)) + std::log(1.0 / eps)) /
                   std::log(1.0 / eta);
  return safe_ceil(v);
}

double residual_contraction(const MomentOperator& m, const MomentOperator& p0,
                            unsigned long ell) {
  if (ell == 0) throw ConfigError("residual_contraction: ell must be positive");
  const CMat md = m.to_dense();
  const CMat pd = p0.to_dense();
  if (md.rows() != pd.rows())
    throw ConfigError("residual_contraction: operator dimensions differ");
  const auto n = md.rows();
  const CMat comp = CMat::Identity(n, n) - pd;
  const double nrm = operator_norm(CMat(comp * md * comp));
  const double dt = std::sqrt(static_cast<double>(n));
  return std::pow(nrm, static_cast<double>(ell)) * dt;
}

}  // namespace udesign
