#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "udesign/fourier_pair.hpp"
#include "udesign/moment_ops.hpp"

namespace udesign {

struct EtaResult {
  double eta = 0.0;
  // leading-order gap bound ((1+t^2) t!^2 + t^2)/d; absent when >= 1 (vacuous)
  std::optional<double> bound;
  std::size_t compressed_dim = 0;  // number of equal-multiset label pairs
};

// Ordered basis (enc(k), enc(l)) of the subspace where both diagonal-phase
// moments act: all label pairs with k and l equal as multisets.
std::vector<std::pair<std::size_t, std::size_t>> multiset_pair_basis(std::size_t d,
                                                                     unsigned t);

// The pair projector of the F basis, compressed to the multiset-pair basis.
// Entries are exact rationals: expanding the inverse multiplicity weight of
// each F-label tuple over set partitions turns the orbit-restricted phase sum
// into products of per-block indicator sums (each block contributes d when
// its accumulated group element vanishes, else 0), all over one common
// integer denominator.
RMat compressed_pf(const FourierTypePair& pair, unsigned t, unsigned threads = 0);

// The Haar projector compressed to the same basis, via the Gram pseudo-inverse
// of the permutation states.
RMat compressed_p0(std::size_t d, unsigned t);

// Largest singular value of (pair projector - Haar projector) on the
// multiset-pair subspace; both operators vanish on its complement, so this
// equals the full-space gap.  Requires a verified Fourier-type pair.
EtaResult tpe_eta(const FourierTypePair& pair, unsigned t, unsigned threads = 0);

// Iterations needed to push the gap below eps on the t-fold twirl:
// ceil((t ln d + ln(1/eps)) / ln(1/eta)).
unsigned long tpe_iterations(double eta, std::size_t d, unsigned t, double eps);

// Certified distance bound d^t * ||(I-P0) M (I-P0)||^ell for the ell-fold
// iterated ensemble (diamond norm bounded by dimension times 2->2 norm).
double residual_contraction(const MomentOperator& m, const MomentOperator& p0,
                            unsigned long ell);

}  // namespace udesign
