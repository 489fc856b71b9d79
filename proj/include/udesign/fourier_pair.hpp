#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "udesign/linalg.hpp"

namespace udesign {

// A pair of orthonormal bases (E, F) where F is obtained from E by phases
// that are additive in the E-index under an abelian group law on [0, d-1]:
//   <k|alpha>_F = e^{i theta(k, alpha)} / sqrt(d),
//   theta(k (+) l, alpha) = theta(k, alpha) + theta(l, alpha)  (mod 2 pi).
// Two concrete families are provided: the discrete-Fourier pair (mod-d
// addition) and the X/Z conjugate pair on N qubits (bitwise XOR).
class FourierTypePair {
 public:
  enum class Group { kModAdd, kXor };

  // Generic constructor; the named factories below are the supported families.
  FourierTypePair(std::size_t d, std::vector<double> theta, Group group,
                  std::string family);

  static FourierTypePair fourier(std::size_t d);
  static FourierTypePair pauli_xz(unsigned n_qubits);

  std::size_t d() const { return d_; }
  const std::string& family() const { return family_; }
  Group group() const { return group_; }

  double theta(std::uint32_t k, std::uint32_t alpha) const {
    return theta_[static_cast<std::size_t>(k) * d_ + alpha];
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    return group_ == Group::kModAdd
               ? static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) + b) % d_)
               : (a ^ b);
  }
  std::uint32_t neg(std::uint32_t a) const {
    return group_ == Group::kModAdd
               ? static_cast<std::uint32_t>((d_ - a) % d_)
               : a;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

  // F as a matrix in the E basis: column alpha holds the F basis vector.
  const CMat& matrix() const { return f_; }

  // Test hook: perturb one phase-table entry (invalidates the pair on purpose).
  void shift_theta_for_test(std::uint32_t k, std::uint32_t alpha, double delta);

 private:
  std::size_t d_;
  std::vector<double> theta_;  // row-major d x d, reduced to [0, 2 pi)
  Group group_;
  std::string family_;
  CMat f_;
  void rebuild_matrix();
};

struct PairReport {
  bool unitary = false;
  bool unbiased = false;
  bool additive = false;
  bool group = false;
  double max_unitary_residual = 0.0;
  double max_unbiased_residual = 0.0;
  double max_additive_residual = 0.0;
  bool pass() const { return unitary && unbiased && additive && group; }
};

// Exhaustive verification for d <= exhaustive_limit, sampled (`samples`
// random triples) above.  Failures are report content, never exceptions.
PairReport verify_pair(const FourierTypePair& pair, std::size_t exhaustive_limit = 256,
                       std::size_t samples = 100000);

}  // namespace udesign
