#pragma once

#include <array>
#include <cstdint>

#include "udesign/linalg.hpp"

namespace udesign {

// Philox-4x32-10 block function.  Counter-based: every 128-bit counter value
// maps independently to 128 output bits under a 64-bit key, so parallel
// consumers can carve up the counter space without sharing state.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// Seed-keyed stream of pseudo-random numbers.  The key is the 64-bit seed;
// the counter is (block index, stream id).  Distinct stream ids give
// non-overlapping counter ranges, which is what makes results reproducible
// under any work partitioning: chunk i of a computation always draws from
// substream(i) regardless of which thread runs it.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

  // Child source with a hash-derived stream id (stable, collision-resistant
  // across nested splits).
  RandomSource substream(std::uint64_t id) const;

  std::uint64_t next_u64();
  double uniform();       // [0, 1)
  double uniform_open();  // (0, 1); safe under log()
  double gaussian();      // standard normal, Box-Muller
  std::uint64_t uniform_int(std::uint64_t n);  // unbiased draw from [0, n)

  std::uint64_t seed_value() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  void refill();
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;  // consumed words in buf_
  bool have_spare_gauss_ = false;
  double spare_gauss_ = 0.0;
};

// Haar-distributed unitary: complex Ginibre sample, QR, then the R-diagonal
// phase correction that removes the QR gauge freedom.
CMat haar_unitary(std::size_t d, RandomSource& rng);

}  // namespace udesign
