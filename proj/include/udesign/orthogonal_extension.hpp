#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "udesign/binary_matrix.hpp"
#include "udesign/linalg.hpp"
#include "udesign/symmetric_group.hpp"

namespace udesign {

using BigRat = boost::multiprecision::cpp_rational;

// An exactly orthogonal real matrix with rational entries, produced either
// directly (identity / permutation) or as a reflection product mapping one
// binary matrix onto another column by column.
class OrthogonalCandidate {
 public:
  static OrthogonalCandidate identity(unsigned t);
  // perm[r] = source row: the matrix maps e_{perm[r]} to e_r.
  static OrthogonalCandidate from_permutation(const Perm& perm);

  unsigned t() const { return t_; }
  const BigRat& at(unsigned r, unsigned c) const { return m_[r * t_ + c]; }

  // Exact checks on the rational entries.
  bool is_orthogonal() const;   // O^T O = I
  bool is_permutation() const;  // every entry 0/1, one 1 per row and column

  // Applies the matrix to a 0/1 vector given as a t-bit integer (component 1
  // in the most significant bit, matching BinaryMatrix columns).
  std::vector<BigRat> apply_to_vertex(std::uint32_t bits) const;

  RMat to_double() const;

 private:
  friend std::optional<OrthogonalCandidate> partial_isometry(const BinaryMatrix&,
                                                             const BinaryMatrix&);
  unsigned t_ = 0;
  std::vector<BigRat> m_;  // row-major t x t
};

// An orthogonal matrix O with O K = K' exactly, built by matching the
// columns of K to those of K' with one Householder reflection per mismatch
// (processed in ascending column order, hence deterministic).  Returns
// nothing when the integer column Gram matrices differ, in which case no
// such isometry exists.
std::optional<OrthogonalCandidate> partial_isometry(const BinaryMatrix& k,
                                                    const BinaryMatrix& kp);

// |{v in {0,1}^t : O v in {0,1}^t}| by exact enumeration; t <= 20.
std::uint64_t hypercube_preserved_count(const OrthogonalCandidate& o);

}  // namespace udesign
