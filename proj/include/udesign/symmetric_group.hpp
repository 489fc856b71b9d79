#pragma once

#include <cstdint>
#include <vector>

#include <boost/rational.hpp>

namespace udesign {

// A permutation of [0, t) stored as an image array: p[s] is the image of s.
using Perm = std::vector<std::uint8_t>;
using Rat = boost::rational<long long>;

Perm identity_perm(unsigned t);
std::vector<Perm> all_permutations(unsigned t);
Perm inverse_perm(const Perm& p);
// (a o b)(s) = a[b[s]]
Perm compose(const Perm& a, const Perm& b);
unsigned cycle_count(const Perm& p);
bool is_valid_perm(const Perm& p);

// All set partitions of [0, n), each as a list of blocks; blocks and their
// elements in ascending order (restricted-growth enumeration).
using SetPartition = std::vector<std::vector<std::uint8_t>>;
std::vector<SetPartition> set_partitions(unsigned n);

// Coefficients c_n such that summing prod_B c_{|B|} over all set partitions
// of [n] gives exactly 1/n!.  They expand the inverse multiplicity weight
// 1/prod_x m_x! of a tuple into per-partition constancy indicators, which is
// what lets orbit-restricted sums factorize over partition blocks.
// c_1 = 1, c_2 = -1/2, c_3 = 2/3, c_4 = -11/8, ...
Rat partition_weight(unsigned n);

}  // namespace udesign
