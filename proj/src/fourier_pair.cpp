#include "udesign/fourier_pair.hpp"

#include <bit>
#include <cmath>

#include "udesign/rng.hpp"

namespace udesign {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double reduce_phase(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

// distance of x from 0 mod 2 pi
double mod_residual(double x) { return std::abs(std::remainder(x, kTwoPi)); }

}  // namespace

FourierTypePair::FourierTypePair(std::size_t d, std::vector<double> theta, Group group,
                                 std::string family)
    : d_(d), theta_(std::move(theta)), group_(group), family_(std::move(family)) {
  if (d_ < 2) throw ConfigError("FourierTypePair: dimension must be at least 2");
  if (theta_.size() != d_ * d_)
    throw ConfigError("FourierTypePair: phase table must be d x d");
  for (double& x : theta_) x = reduce_phase(x);
  rebuild_matrix();
}

void FourierTypePair::rebuild_matrix() {
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d_));
  f_.resize(static_cast<Eigen::Index>(d_), static_cast<Eigen::Index>(d_));
  for (std::size_t k = 0; k < d_; ++k)
    for (std::size_t a = 0; a < d_; ++a)
      f_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a)) =
          std::polar(inv_sqrt_d, theta_[k * d_ + a]);
}

FourierTypePair FourierTypePair::fourier(std::size_t d) {
  if (d < 2) throw ConfigError("fourier_pair: d must be at least 2");
  std::vector<double> theta(d * d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t a = 0; a < d; ++a)
      theta[k * d + a] = reduce_phase(kTwoPi * static_cast<double>(k * a) /
                                      static_cast<double>(d));
  return FourierTypePair(d, std::move(theta), Group::kModAdd, "fourier");
}

FourierTypePair FourierTypePair::pauli_xz(unsigned n_qubits) {
  if (n_qubits == 0) throw ConfigError("pauli_xz_pair: need at least one qubit");
  if (n_qubits >= 14)
    throw BudgetError("pauli_xz_pair: 2^" + std::to_string(n_qubits) +
                      " exceeds the dimension budget");
  const std::size_t d = std::size_t{1} << n_qubits;
  std::vector<double> theta(d * d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t a = 0; a < d; ++a)
      theta[k * d + a] = (std::popcount(k & a) % 2 == 0) ? 0.0 : M_PI;
  return FourierTypePair(d, std::move(theta), Group::kXor, "pauli-xz");
}

void FourierTypePair::shift_theta_for_test(std::uint32_t k, std::uint32_t alpha,
                                           double delta) {
  theta_[static_cast<std::size_t>(k) * d_ + alpha] =
      reduce_phase(theta_[static_cast<std::size_t>(k) * d_ + alpha] + delta);
  rebuild_matrix();
}

PairReport verify_pair(const FourierTypePair& pair, std::size_t exhaustive_limit,
                       std::size_t samples) {
  PairReport rep;
  const std::size_t d = pair.d();
  const auto di = static_cast<Eigen::Index>(d);

  // orthonormality of the F basis
  {
    CMat g = pair.matrix().adjoint() * pair.matrix();
    g -= CMat::Identity(di, di);
    rep.max_unitary_residual = max_abs(g);
    rep.unitary = rep.max_unitary_residual <= 1e-10;
  }

  // unbiasedness: every overlap has modulus exactly 1/sqrt(d)
  {
    const double target = 1.0 / std::sqrt(static_cast<double>(d));
    double worst = 0.0;
    for (Eigen::Index k = 0; k < di; ++k)
      for (Eigen::Index a = 0; a < di; ++a)
        worst = std::max(worst, std::abs(std::abs(pair.matrix()(k, a)) - target));
    rep.max_unbiased_residual = worst;
    rep.unbiased = worst <= 1e-12;
  }

  // group axioms: closure, identity 0, inverses, commutativity, associativity
  {
    bool ok = true;
    for (std::uint32_t a = 0; a < d && ok; ++a) {
      if (pair.add(0, a) != a || pair.add(a, 0) != a) ok = false;
      if (pair.add(a, pair.neg(a)) != 0) ok = false;
      for (std::uint32_t b = 0; b < d && ok; ++b) {
        const std::uint32_t ab = pair.add(a, b);
        if (ab >= d) ok = false;
        if (ab != pair.add(b, a)) ok = false;
      }
    }
    if (ok) {
      if (d <= exhaustive_limit) {
        for (std::uint32_t a = 0; a < d && ok; ++a)
          for (std::uint32_t b = 0; b < d && ok; ++b)
            for (std::uint32_t c = 0; c < d && ok; ++c)
              if (pair.add(pair.add(a, b), c) != pair.add(a, pair.add(b, c))) ok = false;
      } else {
        RandomSource rng(0xF0u);
        for (std::size_t i = 0; i < samples && ok; ++i) {
          const auto a = static_cast<std::uint32_t>(rng.uniform_int(d));
          const auto b = static_cast<std::uint32_t>(rng.uniform_int(d));
          const auto c = static_cast<std::uint32_t>(rng.uniform_int(d));
          if (pair.add(pair.add(a, b), c) != pair.add(a, pair.add(b, c))) ok = false;
        }
      }
    }
    rep.group = ok;
  }

  // additivity of the phase table, wraparound-aware
  {
    double worst = 0.0;
    auto residual = [&pair](std::uint32_t k, std::uint32_t l, std::uint32_t a) {
      return mod_residual(pair.theta(pair.add(k, l), a) - pair.theta(k, a) -
                          pair.theta(l, a));
    };
    if (d <= exhaustive_limit) {
      for (std::uint32_t k = 0; k < d; ++k)
        for (std::uint32_t l = 0; l < d; ++l)
          for (std::uint32_t a = 0; a < d; ++a)
            worst = std::max(worst, residual(k, l, a));
    } else {
      RandomSource rng(0xF1u);
      for (std::size_t i = 0; i < samples; ++i)
        worst = std::max(worst, residual(static_cast<std::uint32_t>(rng.uniform_int(d)),
                                         static_cast<std::uint32_t>(rng.uniform_int(d)),
                                         static_cast<std::uint32_t>(rng.uniform_int(d))));
    }
    rep.max_additive_residual = worst;
    rep.additive = worst <= 1e-10;
  }

  return rep;
}

}  // namespace udesign
