#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <vector>

#include "udesign/binary_matrix.hpp"
#include "udesign/linalg.hpp"
#include "udesign/local_perm.hpp"
#include "udesign/orthogonal_extension.hpp"
#include "udesign/symmetric_group.hpp"

using namespace udesign;

namespace {

// Exact check that the candidate sends every column of k onto the matching
// column of kp.
bool maps_exactly(const OrthogonalCandidate& o, const BinaryMatrix& k, const BinaryMatrix& kp) {
  for (unsigned i = 1; i <= k.cols(); ++i) {
    const auto img = o.apply_to_vertex(k.column_bits(i));
    for (unsigned r = 0; r < k.rows(); ++r)
      if (img[r] != BigRat(kp.bit(r, i) ? 1 : 0)) return false;
  }
  return true;
}

double map_residual_double(const OrthogonalCandidate& o, const BinaryMatrix& k,
                           const BinaryMatrix& kp) {
  const RMat m = o.to_double();
  double worst = 0;
  for (unsigned i = 1; i <= k.cols(); ++i)
    for (unsigned r = 0; r < k.rows(); ++r) {
      double v = 0;
      for (unsigned s = 0; s < k.rows(); ++s) v += m(r, s) * (k.bit(s, i) ? 1.0 : 0.0);
      worst = std::max(worst, std::abs(v - (kp.bit(r, i) ? 1.0 : 0.0)));
    }
  return worst;
}

// Integer column Gram key, upper triangle row-major.
std::vector<int> gram_key(const BinaryMatrix& m) {
  std::vector<int> g;
  for (unsigned i = 1; i <= m.cols(); ++i)
    for (unsigned j = i; j <= m.cols(); ++j) {
      int v = 0;
      for (unsigned s = 0; s < m.rows(); ++s) v += (m.bit(s, i) && m.bit(s, j)) ? 1 : 0;
      g.push_back(v);
    }
  return g;
}

}  // namespace

TEST_CASE("identity and permutation candidates") {
  auto id3 = OrthogonalCandidate::identity(3);
  CHECK(id3.is_orthogonal());
  CHECK(id3.is_permutation());
  CHECK(hypercube_preserved_count(id3) == 8);

  for (const auto& perm : all_permutations(4)) {
    auto o = OrthogonalCandidate::from_permutation(perm);
    CHECK(o.is_orthogonal());
    CHECK(o.is_permutation());
    CHECK(hypercube_preserved_count(o) == 16);
  }

  CHECK_THROWS_AS(OrthogonalCandidate::identity(0), ConfigError);
  CHECK_THROWS_AS(OrthogonalCandidate::from_permutation({0, 0, 1}), ConfigError);
}

TEST_CASE("equal matrices extend to the identity") {
  auto k = BinaryMatrix::from_strings({"011", "101", "110", "000"});
  auto o = partial_isometry(k, k);
  REQUIRE(o.has_value());
  CHECK(o->is_permutation());
  for (unsigned r = 0; r < 4; ++r)
    for (unsigned c = 0; c < 4; ++c) CHECK(o->at(r, c) == BigRat(r == c ? 1 : 0));
  CHECK(hypercube_preserved_count(*o) == 16);
}

TEST_CASE("swapped-column pair produces a reflection, not a permutation") {
  // Single column (0,1,1,0) mapped onto (1,0,0,1): the reflection through
  // their difference.  It fixes the six vertices orthogonal to the
  // difference and exchanges the two columns, eight vertices in all.
  auto k = BinaryMatrix::from_strings({"0", "1", "1", "0"});
  auto kp = BinaryMatrix::from_strings({"1", "0", "0", "1"});
  auto o = partial_isometry(k, kp);
  REQUIRE(o.has_value());
  CHECK(o->is_orthogonal());
  CHECK_FALSE(o->is_permutation());
  CHECK(maps_exactly(*o, k, kp));
  CHECK(map_residual_double(*o, k, kp) <= 1e-10);
  CHECK(hypercube_preserved_count(*o) == 8);
}

TEST_CASE("row-permutation pairs can still induce non-permutation extensions") {
  // (1,1,0,0) -> (0,0,1,1) is realized by swapping row pairs, yet the
  // canonical reflection is not a permutation matrix; it must then fall at
  // or below the half-cube ceiling.
  auto k = BinaryMatrix::from_strings({"1", "1", "0", "0"});
  auto kp = BinaryMatrix::from_strings({"0", "0", "1", "1"});
  CHECK(is_row_permutation(k, kp));
  auto o = partial_isometry(k, kp);
  REQUIRE(o.has_value());
  CHECK(o->is_orthogonal());
  CHECK_FALSE(o->is_permutation());
  CHECK(maps_exactly(*o, k, kp));
  CHECK(hypercube_preserved_count(*o) == 8);
}

TEST_CASE("gram mismatch yields no candidate") {
  auto k = BinaryMatrix::from_strings({"1", "1", "0", "0"});   // weight two
  auto kp = BinaryMatrix::from_strings({"1", "0", "0", "0"});  // weight one
  CHECK_FALSE(partial_isometry(k, kp).has_value());

  auto a = BinaryMatrix::from_strings({"10", "10", "01", "00"});
  auto b = BinaryMatrix::from_strings({"10", "10", "10", "01"});
  CHECK_FALSE(partial_isometry(a, b).has_value());

  CHECK_THROWS_AS(partial_isometry(k, BinaryMatrix(3, 1)), ConfigError);
}

TEST_CASE("parity pair extension is exactly orthogonal and capped on the cube") {
  auto even = BinaryMatrix::from_strings({"000", "011", "101", "110"});
  auto odd = BinaryMatrix::from_strings({"001", "010", "100", "111"});
  CHECK(gram_key(even) == gram_key(odd));
  auto o = partial_isometry(even, odd);
  REQUIRE(o.has_value());
  CHECK(o->is_orthogonal());
  CHECK(maps_exactly(*o, even, odd));
  CHECK(map_residual_double(*o, even, odd) <= 1e-10);
  CHECK_FALSE(o->is_permutation());
  CHECK(hypercube_preserved_count(*o) <= 8);
}

TEST_CASE("exhaustive sweep at order four, widths one to three") {
  // Every pair with equal column Grams admits an extension; an extension
  // that is a permutation matrix certifies a row-permutation pair and fills
  // the whole cube, any other extension reaches at most half of it.
  for (unsigned n = 1; n <= 3; ++n) {
    std::map<std::vector<int>, std::vector<std::uint64_t>> buckets;
    const std::uint64_t total = 1ull << (4 * n);
    for (std::uint64_t code = 0; code < total; ++code)
      buckets[gram_key(BinaryMatrix::from_code(4, n, code))].push_back(code);

    std::uint64_t perm_ext = 0, refl_ext = 0, over_cap = 0, mismatch = 0;
    for (const auto& [g, codes] : buckets)
      for (std::uint64_t ca : codes)
        for (std::uint64_t cb : codes) {
          const auto a = BinaryMatrix::from_code(4, n, ca);
          const auto b = BinaryMatrix::from_code(4, n, cb);
          const auto o = partial_isometry(a, b);
          if (!o) {
            ++mismatch;
            continue;
          }
          if (!maps_exactly(*o, a, b)) ++mismatch;
          const auto cnt = hypercube_preserved_count(*o);
          if (o->is_permutation()) {
            ++perm_ext;
            if (cnt != 16 || !is_row_permutation(a, b)) ++mismatch;
          } else {
            ++refl_ext;
            if (cnt > 8) ++over_cap;
          }
        }
    CHECK(mismatch == 0);
    CHECK(over_cap == 0);
    CHECK(perm_ext > 0);
    CHECK(refl_ext > 0);
    if (n == 3) {
      CHECK(perm_ext == 63952);
      CHECK(refl_ext == 3624);
    }
  }
}

TEST_CASE("hypercube enumeration budget") {
  CHECK_THROWS_AS(hypercube_preserved_count(OrthogonalCandidate::identity(21)), BudgetError);
}
