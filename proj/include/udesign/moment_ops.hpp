#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "udesign/fourier_pair.hpp"
#include "udesign/linalg.hpp"
#include "udesign/rng.hpp"
#include "udesign/symmetric_group.hpp"

namespace udesign {

// A length-t tuple of symbols in [0, d).  The first entry is the most
// significant digit of the encoded label.
using MultiIndex = std::vector<std::uint32_t>;

std::size_t encode_index(const MultiIndex& k, std::size_t d);
MultiIndex decode_index(std::size_t code, std::size_t d, unsigned t);
// result[s] = k[p[s]]
MultiIndex apply_perm(const MultiIndex& k, const Perm& p);
bool same_multiset(MultiIndex a, MultiIndex b);

// Ensemble moment E[U^{(x) t,t}] in one of two carriers: a dense matrix on the
// 2t-fold tensor space, or the 0/1 diagonal of an operator that is diagonal in
// the computational product basis (indexed by enc(k) * d^t + enc(l)).
struct MomentOperator {
  enum class Kind { kDense, kDiagonal };
  Kind kind = Kind::kDense;
  std::size_t d = 0;
  unsigned t = 0;
  CMat dense;
  std::vector<std::uint8_t> diag;

  std::size_t dim() const;
  CMat to_dense() const;  // dense-budget checked
  double trace_real() const;
};

// Orthogonal projector onto the span of the t! permutation-invariant states
// |Psi_pi> = d^{-t/2} sum_m |m, m_pi>, via the Gram pseudo-inverse
// contraction (the states are linearly dependent when d < t).
MomentOperator projector_p0(std::size_t d, unsigned t);

// Diagonal 0/1 indicator over label pairs (k, l): 1 iff k and l agree as
// multisets.  Equals the average of D^{(x) t,t} over uniform diagonal phases.
MomentOperator projector_diag(std::size_t d, unsigned t);

// Gram matrix G_{pi sigma} = d^{cycles(pi sigma^-1) - t} of the permutation
// states, and a symmetric pseudo-inverse with a relative eigenvalue cutoff.
RMat perm_gram(std::size_t d, const std::vector<Perm>& perms);
RMat pinv_sym(const RMat& g, double rel_cutoff = 1e-10);

// Projector onto pairs of equal-multiset labels in the basis whose vectors
// are the columns of b: conjugates the diagonal indicator by b^{(x) t,t}.
CMat basis_pair_projector(const CMat& b, unsigned t);

// Deterministic chunked Monte-Carlo average of draw(rng)^{(x) t,t} over
// `samples` draws.  Chunks use per-index substreams of `seed` and are reduced
// in fixed ascending order, so the result is bitwise independent of `threads`.
CMat mc_average_moment(std::size_t d, unsigned t, std::size_t samples,
                       std::uint64_t seed, unsigned threads,
                       const std::function<CMat(std::size_t, RandomSource&)>& draw);

CMat random_diagonal_unitary(std::size_t d, RandomSource& rng);

CMat mc_haar_moment(std::size_t d, unsigned t, std::size_t samples,
                    std::uint64_t seed, unsigned threads);
CMat mc_diagonal_moment(std::size_t d, unsigned t, std::size_t samples,
                        std::uint64_t seed, unsigned threads);
// Average of (D . F D' F^dag . D'')^{(x) t,t} with D, D', D'' independent
// uniform diagonal phases (the middle factor is diagonal in the F basis):
// estimates P_E P_F P_E.
CMat mc_sandwich_moment(const FourierTypePair& pair, unsigned t,
                        std::size_t samples, std::uint64_t seed, unsigned threads);

}  // namespace udesign
