#include "udesign/rng.hpp"

#include <cmath>

namespace udesign {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t* hi, std::uint32_t* lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  *hi = static_cast<std::uint32_t>(p >> 32);
  *lo = static_cast<std::uint32_t>(p);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], &hi0, &lo0);
    mulhilo(kPhiloxM1, ctr[2], &hi1, &lo1);
    const std::array<std::uint32_t, 4> next = {hi1 ^ ctr[1] ^ key[0], lo1,
                                               hi0 ^ ctr[3] ^ key[1], lo0};
    ctr = next;
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {}

RandomSource RandomSource::substream(std::uint64_t id) const {
  return RandomSource(seed_, splitmix64(stream_ + 0x9E3779B97F4A7C15ULL * (id + 1)));
}

void RandomSource::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  buf_ = philox4x32(ctr, key);
  ++block_;
  pos_ = 0;
}

std::uint64_t RandomSource::next_u64() {
  if (pos_ > 2) refill();
  const std::uint64_t lo = buf_[static_cast<std::size_t>(pos_)];
  const std::uint64_t hi = buf_[static_cast<std::size_t>(pos_ + 1)];
  pos_ += 2;
  return lo | (hi << 32);
}

double RandomSource::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomSource::gaussian() {
  if (have_spare_gauss_) {
    have_spare_gauss_ = false;
    return spare_gauss_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_gauss_ = r * std::sin(a);
  have_spare_gauss_ = true;
  return r * std::cos(a);
}

std::uint64_t RandomSource::uniform_int(std::uint64_t n) {
  if (n == 0) throw ConfigError("uniform_int: n must be positive");
  const std::uint64_t limit = n * (UINT64_MAX / n);  // reject above the clean multiple
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

CMat haar_unitary(std::size_t d, RandomSource& rng) {
  if (d == 0) throw ConfigError("haar_unitary: dimension must be positive");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CMat a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      a(i, j) = cplx(rng.gaussian() * inv_sqrt2, rng.gaussian() * inv_sqrt2);
  Eigen::HouseholderQR<CMat> qr(a);
  CMat q = qr.householderQ() * CMat::Identity(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const cplx r = qr.matrixQR()(j, j);
    const double m = std::abs(r);
    const cplx phase = (m > 0.0) ? r / m : cplx(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

}  // namespace udesign
