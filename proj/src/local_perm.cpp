#include "udesign/local_perm.hpp"

#include <algorithm>
#include <array>
#include <atomic>

#include "udesign/linalg.hpp"
#include "udesign/parallel.hpp"
#include "udesign/symmetric_group.hpp"

namespace udesign {

namespace {

constexpr unsigned kEnumBits = 26;     // at most 2^26 matrices per scan
constexpr unsigned kNaiveBits = 16;    // at most 2^16 matrices for the pair loop
constexpr unsigned kKeyBits = 256;     // packed key budget (bucket + class)
constexpr std::uint64_t kProgressStep = 1u << 20;

// Fixed-width big-endian bit record: the bucket key occupies the leading
// bits, the row-multiset class key the trailing ones, so lexicographic order
// on the words groups equal buckets first and equal classes inside them.
struct PackedKey {
  std::array<std::uint64_t, 4> w{};

  friend bool operator==(const PackedKey& a, const PackedKey& b) { return a.w == b.w; }
  friend bool operator<(const PackedKey& a, const PackedKey& b) { return a.w < b.w; }
};

class BitWriter {
 public:
  explicit BitWriter(PackedKey& key) : key_(key) {}

  void push(std::uint32_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) {
      if ((value >> i) & 1u) key_.w[pos_ >> 6] |= 0x8000000000000000ull >> (pos_ & 63u);
      ++pos_;
    }
  }

 private:
  PackedKey& key_;
  unsigned pos_ = 0;
};

struct ScanPlan {
  unsigned t = 0, n = 0;
  std::uint64_t total = 0;
  unsigned bucket_bits = 0;                       // leading bits holding the locality key
  std::vector<std::vector<unsigned>> sets;        // family sets in canonical order
  std::vector<std::vector<std::uint32_t>> table;  // per set: row value -> restricted value
  std::vector<unsigned> width;                    // per set: restricted width in bits
};

ScanPlan make_plan(unsigned t, unsigned n, const IndexFamily& fam, unsigned max_bits) {
  if (t == 0 || n == 0) throw ConfigError("matrix shape must be positive");
  if (fam.n() != n) throw ConfigError("index family width does not match the matrix shape");
  if (static_cast<std::uint64_t>(t) * n > max_bits)
    throw BudgetError("matrix enumeration exceeds the scan budget");

  ScanPlan plan;
  plan.t = t;
  plan.n = n;
  plan.total = 1ull << (t * n);
  plan.sets = fam.sets();

  unsigned bucket_bits = 0;
  const std::uint32_t nrows = 1u << n;
  for (const auto& set : plan.sets) {
    const unsigned r = static_cast<unsigned>(set.size());
    plan.width.push_back(r);
    bucket_bits += r * t;
    std::vector<std::uint32_t> tab(nrows);
    for (std::uint32_t row = 0; row < nrows; ++row) {
      std::uint32_t v = 0;
      for (unsigned pos : set) v = (v << 1) | ((row >> (n - pos)) & 1u);
      tab[row] = v;
    }
    plan.table.push_back(std::move(tab));
  }
  plan.bucket_bits = bucket_bits;
  if (bucket_bits + t * n > kKeyBits)
    throw BudgetError("canonical key is wider than the packed scan budget");
  return plan;
}

PackedKey key_of(const ScanPlan& plan, std::uint64_t code) {
  const std::uint32_t mask = (1u << plan.n) - 1u;
  std::array<std::uint32_t, 32> rows{};
  for (unsigned s = 0; s < plan.t; ++s)
    rows[s] = static_cast<std::uint32_t>(code >> ((plan.t - 1 - s) * plan.n)) & mask;

  PackedKey key;
  BitWriter out(key);
  std::array<std::uint32_t, 32> scratch{};
  for (size_t i = 0; i < plan.sets.size(); ++i) {
    const auto& tab = plan.table[i];
    for (unsigned s = 0; s < plan.t; ++s) scratch[s] = tab[rows[s]];
    std::sort(scratch.begin(), scratch.begin() + plan.t);
    for (unsigned s = 0; s < plan.t; ++s) out.push(scratch[s], plan.width[i]);
  }
  // Class key: the sorted row multiset (row permutation canonical form).
  std::sort(rows.begin(), rows.begin() + plan.t);
  for (unsigned s = 0; s < plan.t; ++s) out.push(rows[s], plan.n);
  return key;
}

bool same_bucket(const PackedKey& a, const PackedKey& b, unsigned bucket_bits) {
  const unsigned full = bucket_bits >> 6;
  for (unsigned i = 0; i < full; ++i)
    if (a.w[i] != b.w[i]) return false;
  const unsigned rem = bucket_bits & 63u;
  if (rem == 0) return true;
  const std::uint64_t mask = ~0ull << (64 - rem);
  return ((a.w[full] ^ b.w[full]) & mask) == 0;
}

std::vector<PackedKey> scan_keys(const ScanPlan& plan, unsigned threads,
                                 const ProgressFn& progress) {
  std::vector<PackedKey> keys(plan.total);
  ThreadPool pool(threads);
  const std::uint64_t chunk = std::min<std::uint64_t>(plan.total, kProgressStep);
  const std::uint64_t njobs = (plan.total + chunk - 1) / chunk;
  std::atomic<std::uint64_t> done{0};
  pool.run_indexed(njobs, [&](std::size_t j) {
    const std::uint64_t lo = j * chunk;
    const std::uint64_t hi = std::min(plan.total, lo + chunk);
    for (std::uint64_t code = lo; code < hi; ++code) keys[code] = key_of(plan, code);
    const std::uint64_t d = done.fetch_add(hi - lo) + (hi - lo);
    if (progress) progress(d, plan.total);
  });
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::uint64_t count_sorted(const std::vector<PackedKey>& keys, unsigned bucket_bits) {
  std::uint64_t lambda = 0;
  size_t i = 0;
  while (i < keys.size()) {
    std::uint64_t bucket = 0, squares = 0;
    size_t j = i;
    while (j < keys.size() && same_bucket(keys[i], keys[j], bucket_bits)) {
      size_t k = j;
      while (k < keys.size() && keys[k] == keys[j]) ++k;
      const std::uint64_t cls = k - j;
      bucket += cls;
      squares += cls * cls;
      j = k;
    }
    lambda += bucket * bucket - squares;
    i = j;
  }
  return lambda;
}

}  // namespace

std::uint64_t lambda_count(unsigned t, unsigned n, const IndexFamily& fam, unsigned threads,
                           const ProgressFn& progress) {
  const ScanPlan plan = make_plan(t, n, fam, kEnumBits);
  const std::vector<PackedKey> keys = scan_keys(plan, threads, progress);
  return count_sorted(keys, plan.bucket_bits);
}

std::uint64_t lambda_count_naive(unsigned t, unsigned n, const IndexFamily& fam) {
  if (t == 0 || n == 0) throw ConfigError("matrix shape must be positive");
  if (static_cast<std::uint64_t>(t) * n > kNaiveBits)
    throw BudgetError("matrix enumeration exceeds the pair-loop budget");
  const std::uint64_t total = 1ull << (t * n);
  std::vector<BinaryMatrix> mats;
  mats.reserve(total);
  for (std::uint64_t code = 0; code < total; ++code)
    mats.push_back(BinaryMatrix::from_code(t, n, code));

  std::vector<std::vector<std::uint32_t>> keys(total);
  std::vector<std::vector<std::uint32_t>> classes(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    keys[i] = canonical_key(mats[i], fam);
    std::vector<std::uint32_t> rows(t);
    for (unsigned s = 0; s < t; ++s) rows[s] = mats[i].row(s);
    std::sort(rows.begin(), rows.end());
    classes[i] = std::move(rows);
  }

  std::uint64_t lambda = 0;
  for (std::uint64_t i = 0; i < total; ++i)
    for (std::uint64_t j = 0; j < total; ++j)
      if (keys[i] == keys[j] && classes[i] != classes[j]) ++lambda;
  return lambda;
}

std::vector<GrowthPoint> lambda_growth(unsigned t, unsigned n_max, unsigned threads,
                                       const ProgressFn& progress) {
  if (n_max < 2) throw ConfigError("growth sweep needs n_max >= 2");
  std::vector<GrowthPoint> out;
  for (unsigned n = 2; n <= n_max; ++n) {
    GrowthPoint p;
    p.n = n;
    p.lambda = lambda_count(t, n, IndexFamily::all_subsets_of_size(n, 2), threads, progress);
    if (!out.empty() && out.back().lambda > 0)
      p.ratio = static_cast<double>(p.lambda) / static_cast<double>(out.back().lambda);
    out.push_back(p);
  }
  return out;
}

std::vector<std::pair<BinaryMatrix, BinaryMatrix>> counted_pairs(unsigned t, unsigned n,
                                                                 const IndexFamily& fam,
                                                                 std::uint64_t cap) {
  const ScanPlan plan = make_plan(t, n, fam, kNaiveBits);

  struct Entry {
    PackedKey key;
    std::uint64_t code;
  };
  std::vector<Entry> entries(plan.total);
  for (std::uint64_t code = 0; code < plan.total; ++code)
    entries[code] = {key_of(plan, code), code};
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.key < b.key || (a.key == b.key && a.code < b.code);
  });

  std::vector<std::pair<BinaryMatrix, BinaryMatrix>> out;
  size_t i = 0;
  while (i < entries.size()) {
    size_t j = i;
    while (j < entries.size() && same_bucket(entries[i].key, entries[j].key, plan.bucket_bits))
      ++j;
    for (size_t a = i; a < j; ++a)
      for (size_t b = i; b < j; ++b) {
        if (entries[a].key == entries[b].key) continue;  // same row-multiset class
        if (out.size() >= cap) throw BudgetError("counted pair list exceeds the cap");
        out.emplace_back(BinaryMatrix::from_code(t, n, entries[a].code),
                         BinaryMatrix::from_code(t, n, entries[b].code));
      }
    i = j;
  }
  return out;
}

bool c0c1_column_form(const BinaryMatrix& k, const BinaryMatrix& kp) {
  if (k.rows() != 4 || kp.rows() != 4 || k.cols() != kp.cols())
    throw ConfigError("column-form check needs matching four-row matrices");

  // Allowed aligned column pairs, columns packed with row 0 in the MSB.
  static const std::array<std::pair<std::uint32_t, std::uint32_t>, 8> allowed_list = {{
      {0b0000, 0b0000},
      {0b1111, 0b1111},
      {0b0011, 0b0011},
      {0b1100, 0b1100},
      {0b1010, 0b1010},
      {0b0101, 0b0101},
      {0b0110, 0b1001},
      {0b1001, 0b0110},
  }};
  std::array<std::array<bool, 16>, 16> allowed{};
  for (const auto& [a, b] : allowed_list) allowed[a][b] = true;

  // Row rearrangement acts on the 4 bits of a packed column.
  const auto perms = all_permutations(4);
  std::array<std::array<std::uint8_t, 16>, 24> act{};
  for (size_t p = 0; p < perms.size(); ++p)
    for (std::uint32_t col = 0; col < 16; ++col) {
      std::uint32_t v = 0;
      for (unsigned m = 0; m < 4; ++m) {
        const unsigned src = perms[p][m];  // row src of the original is row m after
        v = (v << 1) | ((col >> (3 - src)) & 1u);
      }
      act[p][col] = static_cast<std::uint8_t>(v);
    }

  const unsigned ncols = k.cols();
  std::vector<std::uint8_t> ka(ncols), kb(ncols);
  for (unsigned i = 0; i < ncols; ++i) {
    ka[i] = static_cast<std::uint8_t>(k.column_bits(i + 1));
    kb[i] = static_cast<std::uint8_t>(kp.column_bits(i + 1));
  }
  for (size_t p = 0; p < perms.size(); ++p)
    for (size_t q = 0; q < perms.size(); ++q) {
      bool ok = true;
      for (unsigned i = 0; i < ncols && ok; ++i) ok = allowed[act[p][ka[i]]][act[q][kb[i]]];
      if (ok) return true;
    }
  return false;
}

}  // namespace udesign
