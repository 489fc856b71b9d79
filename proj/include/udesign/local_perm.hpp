#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "udesign/binary_matrix.hpp"

namespace udesign {

// Progress sink for long enumerations; called with (done, total) roughly
// every 2^20 matrices and once at the end.
using ProgressFn = std::function<void(std::uint64_t, std::uint64_t)>;

// Number of ordered pairs (K, K') of t x n binary matrices that share every
// canonical key of `fam` but are not row permutations of each other.
//
// Single pass over all 2^(t*n) matrices: bucket by the concatenated
// canonical-key tuple; inside a bucket the row-permutation classes partition
// the matrices, so the bucket contributes (bucket size)^2 minus the sum of
// squared class sizes.  Enumeration budget 2^(t*n) <= 2^26; the packed key
// must fit 256 bits.
std::uint64_t lambda_count(unsigned t, unsigned n, const IndexFamily& fam,
                           unsigned threads = 0, const ProgressFn& progress = {});

// Reference implementation: double loop over matrix pairs, testing the
// locality predicate and the row-permutation predicate directly.  Budget
// 2^(t*n) <= 2^16 matrices.
std::uint64_t lambda_count_naive(unsigned t, unsigned n, const IndexFamily& fam);

struct GrowthPoint {
  unsigned n = 0;
  std::uint64_t lambda = 0;
  // lambda(n) / lambda(n-1); absent for the first point and whenever the
  // previous count is zero.
  std::optional<double> ratio;
};

// The count for the complete 2-local family at fixed t, for n = 2..n_max.
std::vector<GrowthPoint> lambda_growth(unsigned t, unsigned n_max, unsigned threads = 0,
                                       const ProgressFn& progress = {});

// All ordered pairs counted by lambda_count, materialized for structural
// checks.  Throws BudgetError if more than `cap` pairs would be returned.
std::vector<std::pair<BinaryMatrix, BinaryMatrix>> counted_pairs(
    unsigned t, unsigned n, const IndexFamily& fam, std::uint64_t cap = 1u << 22);

// True when some independent rearrangement of the rows of k and of kp makes
// every aligned column pair one of the eight allowed patterns: six equal
// pairs (0000, 1111, 0011, 1100, 1010, 0101 matched with themselves) plus
// the two swapped pairs (0110, 1001) and (1001, 0110).  Requires t = 4.
bool c0c1_column_form(const BinaryMatrix& k, const BinaryMatrix& kp);

}  // namespace udesign
