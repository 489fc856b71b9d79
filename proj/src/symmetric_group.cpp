#include "udesign/symmetric_group.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace udesign {

Perm identity_perm(unsigned t) {
  Perm p(t);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  return p;
}

std::vector<Perm> all_permutations(unsigned t) {
  if (t > 10) throw std::invalid_argument("all_permutations: degree too large");
  Perm p = identity_perm(t);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Perm inverse_perm(const Perm& p) {
  Perm q(p.size());
  for (std::size_t s = 0; s < p.size(); ++s) q[p[s]] = static_cast<std::uint8_t>(s);
  return q;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm r(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) r[s] = a[b[s]];
  return r;
}

unsigned cycle_count(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  unsigned cycles = 0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (seen[s]) continue;
    ++cycles;
    for (std::size_t j = s; !seen[j]; j = p[j]) seen[j] = true;
  }
  return cycles;
}

bool is_valid_perm(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  for (std::uint8_t v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::vector<SetPartition> set_partitions(unsigned n) {
  std::vector<SetPartition> out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  // restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1])
  std::vector<std::uint8_t> a(n, 0);
  auto emit = [&] {
    const std::uint8_t nblocks =
        static_cast<std::uint8_t>(*std::max_element(a.begin(), a.end()) + 1);
    SetPartition q(nblocks);
    for (unsigned i = 0; i < n; ++i) q[a[i]].push_back(static_cast<std::uint8_t>(i));
    out.push_back(std::move(q));
  };
  while (true) {
    emit();
    // next string in lexicographic order
    int i = static_cast<int>(n) - 1;
    for (; i > 0; --i) {
      std::uint8_t mx = 0;
      for (int j = 0; j < i; ++j) mx = std::max(mx, a[j]);
      if (a[i] <= mx) break;
    }
    if (i == 0) return out;
    ++a[i];
    std::fill(a.begin() + i + 1, a.end(), std::uint8_t{0});
  }
}

Rat partition_weight(unsigned n) {
  if (n == 0) throw std::invalid_argument("partition_weight: n must be positive");
  // recurrence from the Bell-polynomial expansion of the target sequence
  // B_m = 1/m!:  c_n = 1/n! - sum_{k=0}^{n-2} C(n-1,k) c_{k+1} / (n-1-k)!
  static thread_local std::vector<Rat> cache;  // cache[m-1] = c_m
  while (cache.size() < n) {
    const unsigned m = static_cast<unsigned>(cache.size()) + 1;
    long long mfact = 1;
    for (unsigned i = 2; i <= m; ++i) mfact *= i;
    Rat c(1, mfact);
    long long binom = 1;  // C(m-1, k)
    for (unsigned k = 0; k + 2 <= m; ++k) {
      if (k > 0) binom = binom * (m - k) / k;
      long long dfact = 1;
      for (unsigned i = 2; i <= m - 1 - k; ++i) dfact *= i;
      c -= Rat(binom) * cache[k] / Rat(dfact);
    }
    cache.push_back(c);
  }
  return cache[n - 1];
}

}  // namespace udesign
