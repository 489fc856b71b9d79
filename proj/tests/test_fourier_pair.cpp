#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <complex>

#include "udesign/fourier_pair.hpp"

using namespace udesign;

namespace {

// Independent residual of theta(k (+) l, a) - theta(k, a) - theta(l, a) mod 2 pi.
double additive_residual(const FourierTypePair& p, std::uint32_t k, std::uint32_t l,
                         std::uint32_t a) {
  const double x = p.theta(p.add(k, l), a) - p.theta(k, a) - p.theta(l, a);
  return std::abs(std::remainder(x, 2.0 * M_PI));
}

}  // namespace

TEST_CASE("fourier pair at d=2 is the Hadamard basis") {
  auto p = FourierTypePair::fourier(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(p.matrix()(0, 0) - cplx(s, 0)) < 1e-15);
  CHECK(std::abs(p.matrix()(0, 1) - cplx(s, 0)) < 1e-15);
  CHECK(std::abs(p.matrix()(1, 0) - cplx(s, 0)) < 1e-15);
  CHECK(std::abs(p.matrix()(1, 1) - cplx(-s, 0)) < 1e-15);
}

TEST_CASE("fourier pair at d=3 matches third roots of unity and verifies") {
  auto p = FourierTypePair::fourier(3);
  const cplx omega = std::polar(1.0, 2.0 * M_PI / 3.0);
  const double s = 1.0 / std::sqrt(3.0);
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a) {
      cplx expected = s * std::pow(omega, k * a);
      CHECK(std::abs(p.matrix()(k, a) - expected) < 1e-13);
    }
  auto rep = verify_pair(p);
  CHECK(rep.pass());
}

TEST_CASE("fourier pair at d=6: exhaustive additivity residuals below 1e-12") {
  auto p = FourierTypePair::fourier(6);
  double worst = 0.0;
  for (std::uint32_t k = 0; k < 6; ++k)
    for (std::uint32_t l = 0; l < 6; ++l)
      for (std::uint32_t a = 0; a < 6; ++a)
        worst = std::max(worst, additive_residual(p, k, l, a));
  CHECK(worst <= 1e-12);
  auto rep = verify_pair(p);
  CHECK(rep.max_additive_residual <= 1e-12);
}

TEST_CASE("single-qubit X/Z pair coincides with the d=2 Fourier pair") {
  auto xz = FourierTypePair::pauli_xz(1);
  auto f2 = FourierTypePair::fourier(2);
  CHECK(xz.d() == 2);
  CHECK(max_abs(CMat(xz.matrix() - f2.matrix())) < 1e-15);
}

TEST_CASE("two-qubit X/Z pair has parity signs over half entries") {
  auto p = FourierTypePair::pauli_xz(2);
  CHECK(p.d() == 4);
  for (std::uint32_t k = 0; k < 4; ++k)
    for (std::uint32_t a = 0; a < 4; ++a) {
      const double sign = (std::popcount(k & a) % 2 == 0) ? 0.5 : -0.5;
      CHECK(std::abs(p.matrix()(k, a) - cplx(sign, 0)) < 1e-15);
    }
}

TEST_CASE("three-qubit X/Z pair: exhaustive additivity over all triples") {
  auto p = FourierTypePair::pauli_xz(3);
  double worst = 0.0;
  for (std::uint32_t k = 0; k < 8; ++k)
    for (std::uint32_t l = 0; l < 8; ++l)
      for (std::uint32_t a = 0; a < 8; ++a)
        worst = std::max(worst, additive_residual(p, k, l, a));
  CHECK(worst <= 1e-12);
}

TEST_CASE("verify_pair accepts both reference families") {
  auto r5 = verify_pair(FourierTypePair::fourier(5));
  CHECK(r5.unitary);
  CHECK(r5.unbiased);
  CHECK(r5.additive);
  CHECK(r5.group);
  CHECK(r5.pass());

  auto rxz = verify_pair(FourierTypePair::pauli_xz(2));
  CHECK(rxz.pass());
}

TEST_CASE("verify_pair flags a tampered phase table") {
  auto p = FourierTypePair::fourier(4);
  p.shift_theta_for_test(0, 0, 0.1);
  auto rep = verify_pair(p);
  CHECK_FALSE(rep.additive);
  CHECK(rep.max_additive_residual > 1e-3);
  CHECK_FALSE(rep.pass());
}

TEST_CASE("fourier and X/Z pairs differ as matrices on two qubits") {
  auto f = FourierTypePair::fourier(4);
  auto xz = FourierTypePair::pauli_xz(2);
  CHECK(max_abs(CMat(f.matrix() - xz.matrix())) > 0.1);
}

TEST_CASE("identity row of the phase table vanishes") {
  const std::vector<FourierTypePair> pairs = {FourierTypePair::fourier(7),
                                              FourierTypePair::pauli_xz(3)};
  for (const auto& p : pairs)
    for (std::uint32_t a = 0; a < p.d(); ++a)
      CHECK(std::abs(std::remainder(p.theta(0, a), 2.0 * M_PI)) < 1e-15);
}

TEST_CASE("group helpers: inverses and subtraction") {
  auto f = FourierTypePair::fourier(6);
  for (std::uint32_t a = 0; a < 6; ++a) {
    CHECK(f.add(a, f.neg(a)) == 0);
    for (std::uint32_t b = 0; b < 6; ++b) CHECK(f.add(f.sub(a, b), b) == a);
  }
  auto x = FourierTypePair::pauli_xz(2);
  for (std::uint32_t a = 0; a < 4; ++a) CHECK(x.neg(a) == a);
}

TEST_CASE("constructor rejects malformed input") {
  CHECK_THROWS_AS(FourierTypePair::fourier(1), ConfigError);
  CHECK_THROWS_AS(FourierTypePair(3, std::vector<double>(4, 0.0),
                                  FourierTypePair::Group::kModAdd, "bad"),
                  ConfigError);
  CHECK_THROWS_AS(FourierTypePair::pauli_xz(0), ConfigError);
  CHECK_THROWS_AS(FourierTypePair::pauli_xz(20), BudgetError);
}
