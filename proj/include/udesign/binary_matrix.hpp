#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace udesign {

// A small matrix over {0,1} with rows indexed 0..rows-1 and columns
// ("positions") indexed 1..cols.  Each row is stored as a cols-bit integer
// with position 1 in the most significant bit, so a row reads naturally as
// the binary string of its entries.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(unsigned rows, unsigned cols);  // zero-filled

  // Rows given as cols-bit integers (position 1 = most significant bit).
  static BinaryMatrix from_rows(unsigned cols, const std::vector<std::uint32_t>& rows);
  // Rows given as strings of '0'/'1', e.g. {"0110", "1001"}.
  static BinaryMatrix from_strings(const std::vector<std::string>& rows);
  // Dense enumeration code: row 0 occupies the most significant cols-bit
  // block of the code, row rows-1 the least significant.
  static BinaryMatrix from_code(unsigned rows, unsigned cols, std::uint64_t code);

  unsigned rows() const { return rows_; }
  unsigned cols() const { return cols_; }

  bool bit(unsigned row, unsigned pos) const;  // pos in [1, cols]
  void set_bit(unsigned row, unsigned pos, bool value);

  std::uint32_t row(unsigned row) const { return row_[row]; }
  // Column `pos` packed as a rows-bit integer, row 0 in the most
  // significant bit.
  std::uint32_t column_bits(unsigned pos) const;

  // The subsequence of row `row` restricted to `positions` (strictly
  // ascending), packed with the smallest position in the most significant
  // bit.
  std::uint32_t row_restricted(unsigned row, const std::vector<unsigned>& positions) const;

  std::uint64_t code() const;
  std::string to_string() const;  // rows joined by '/', e.g. "01/10"

  friend bool operator==(const BinaryMatrix& a, const BinaryMatrix& b) = default;

 private:
  unsigned rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> row_;
};

// A family of index sets over positions [1, n]: each set is a nonempty
// ascending list of distinct positions, and the family is kept sorted in
// lexicographic order with duplicate sets rejected.  The stored order is
// the canonical iteration order used everywhere keys are concatenated.
class IndexFamily {
 public:
  IndexFamily(unsigned n, std::vector<std::vector<unsigned>> sets);

  // All subsets of [1, n] of size exactly r, in lexicographic order.
  static IndexFamily all_subsets_of_size(unsigned n, unsigned r);
  // The single full-width set {1, ..., n}.
  static IndexFamily full_width(unsigned n);

  unsigned n() const { return n_; }
  const std::vector<std::vector<unsigned>>& sets() const { return sets_; }

  // True when every set of this family also appears in `other`.
  bool is_subfamily_of(const IndexFamily& other) const;

  std::string label() const;  // e.g. "{1,2}{1,3}{2,3}"

 private:
  unsigned n_ = 0;
  std::vector<std::vector<unsigned>> sets_;
};

// Sorted multiset of the rows of `k` restricted to `positions`: the
// canonical representative of the row-subsequence multiset.  Positions must
// be nonempty, strictly ascending and within [1, cols].
std::vector<std::uint32_t> canonical_omega(const BinaryMatrix& k,
                                           const std::vector<unsigned>& positions);

// Concatenation of canonical_omega over the family's sets in stored
// (lexicographic) order — the full locality key of the matrix.
std::vector<std::uint32_t> canonical_key(const BinaryMatrix& k, const IndexFamily& fam);

// True iff every canonical key of the family agrees between k and kp.
bool is_local_permutation(const BinaryMatrix& k, const BinaryMatrix& kp,
                          const IndexFamily& fam);

// True iff the rows of k are a permutation of the rows of kp (sorted
// row-integer comparison).
bool is_row_permutation(const BinaryMatrix& k, const BinaryMatrix& kp);

}  // namespace udesign
