#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "udesign/moment_ops.hpp"
#include "udesign/report.hpp"
#include "udesign/tpe.hpp"

using namespace udesign;

namespace {

// dense-route gap: build the pair projector, sandwich by the diagonal
// indicator, subtract the Haar projector, take the spectral norm
double dense_eta(const FourierTypePair& pair, unsigned t) {
  const std::size_t d = pair.d();
  const CMat pf = basis_pair_projector(pair.matrix(), t);
  const MomentOperator pe = projector_diag(d, t);
  CMat a = pf;
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    if (!pe.diag[static_cast<std::size_t>(r)]) {
      a.row(r).setZero();
      a.col(r).setZero();
    }
  a -= projector_p0(d, t).dense;
  return operator_norm(a);
}

const EtaResult& cached_eta(std::size_t d, unsigned t) {
  static std::map<std::pair<std::size_t, unsigned>, EtaResult> cache;
  auto it = cache.find({d, t});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(d, t),
                       tpe_eta(FourierTypePair::fourier(d), t, 0))
             .first;
  return it->second;
}

}  // namespace

TEST_CASE("multiset pair basis enumerates equal-multiset label pairs in order") {
  CHECK(multiset_pair_basis(5, 2).size() == 45);   // 2 d^2 - d
  CHECK(multiset_pair_basis(2, 3).size() == 20);
  CHECK(multiset_pair_basis(8, 3).size() == 2528);
  CHECK(multiset_pair_basis(32, 2).size() == 2016);
  const auto basis = multiset_pair_basis(3, 2);
  CHECK(std::is_sorted(basis.begin(), basis.end()));
  for (const auto& [k, l] : basis)
    CHECK(same_multiset(decode_index(k, 3, 2), decode_index(l, 3, 2)));
  CHECK_THROWS_AS(multiset_pair_basis(32, 3), BudgetError);
}

TEST_CASE("compressed operators equal the dense blocks entrywise") {
  struct Case {
    FourierTypePair pair;
    unsigned t;
  };
  const std::vector<Case> cases = {{FourierTypePair::fourier(2), 2},
                                   {FourierTypePair::fourier(3), 2},
                                   {FourierTypePair::fourier(4), 2},
                                   {FourierTypePair::pauli_xz(2), 2},
                                   {FourierTypePair::fourier(2), 3}};
  for (const auto& c : cases) {
    const std::size_t d = c.pair.d();
    CAPTURE(d);
    CAPTURE(c.t);
    const std::size_t dt = checked_pow(d, c.t);
    const auto basis = multiset_pair_basis(d, c.t);
    const CMat pf = basis_pair_projector(c.pair.matrix(), c.t);
    const CMat p0 = projector_p0(d, c.t).dense;
    const RMat cf = compressed_pf(c.pair, c.t);
    const RMat c0 = compressed_p0(d, c.t);
    double worst_f = 0.0, worst_0 = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto ri = static_cast<Eigen::Index>(basis[i].first * dt + basis[i].second);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto rj =
            static_cast<Eigen::Index>(basis[j].first * dt + basis[j].second);
        worst_f = std::max(worst_f,
                           std::abs(cf(static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(j)) -
                                    pf(ri, rj).real()) +
                               std::abs(pf(ri, rj).imag()));
        worst_0 = std::max(worst_0,
                           std::abs(c0(static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(j)) -
                                    p0(ri, rj).real()) +
                               std::abs(p0(ri, rj).imag()));
      }
    }
    CHECK(worst_f <= 1e-12);
    CHECK(worst_0 <= 1e-12);
  }
}

TEST_CASE("gap vanishes exactly at order one") {
  for (std::size_t d = 2; d <= 8; ++d) {
    CAPTURE(d);
    CHECK(tpe_eta(FourierTypePair::fourier(d), 1).eta <= 1e-10);
  }
  for (unsigned n = 1; n <= 3; ++n) {
    CAPTURE(n);
    CHECK(tpe_eta(FourierTypePair::pauli_xz(n), 1).eta <= 1e-10);
  }
}

TEST_CASE("compressed gap equals the dense-route gap") {
  const std::vector<std::pair<std::size_t, unsigned>> cases = {
      {2, 2}, {3, 2}, {4, 2}, {2, 3}};
  for (const auto& [d, t] : cases) {
    CAPTURE(d);
    CAPTURE(t);
    const auto pair = FourierTypePair::fourier(d);
    CHECK(std::abs(dense_eta(pair, t) - tpe_eta(pair, t).eta) <= 1e-9);
  }
  const auto xz = FourierTypePair::pauli_xz(2);
  CHECK(std::abs(dense_eta(xz, 2) - tpe_eta(xz, 2).eta) <= 1e-9);
}

TEST_CASE("gap scaling in dimension at order two, with recorded values") {
  const EtaResult& e8 = cached_eta(8, 2);
  const EtaResult& e16 = cached_eta(16, 2);
  const EtaResult& e32 = cached_eta(32, 2);

  CHECK(e32.eta <= 0.75);
  REQUIRE(e32.bound.has_value());
  CHECK(*e32.bound == doctest::Approx(24.0 / 32.0));
  CHECK_FALSE(e16.bound.has_value());  // 24/16 >= 1 is vacuous
  CHECK_FALSE(e8.bound.has_value());

  CHECK(e32.eta < e16.eta);
  CHECK(e16.eta < e8.eta);
  for (const auto* e : {&e8, &e16, &e32}) CHECK(e->eta >= 0.0);
  // rescaled gaps stay below the leading-order constant
  CHECK(e8.eta * 8 <= 24.0);
  CHECK(e16.eta * 16 <= 24.0);
  CHECK(e32.eta * 32 <= 24.0);

  const json golden = load_json(fixture_path("golden.json"));
  const auto& vals = golden.at("values");
  CHECK(e8.eta ==
        doctest::Approx(vals.at("eta_fourier_d8_t2").at("value").get<double>())
            .epsilon(1e-9));
  CHECK(e16.eta ==
        doctest::Approx(vals.at("eta_fourier_d16_t2").at("value").get<double>())
            .epsilon(1e-9));
  CHECK(e32.eta ==
        doctest::Approx(vals.at("eta_fourier_d32_t2").at("value").get<double>())
            .epsilon(1e-9));
}

TEST_CASE("golden regression: two-qubit X/Z gap at order two") {
  const json golden = load_json(fixture_path("golden.json"));
  const double want =
      golden.at("values").at("eta_xz_n2_t2").at("value").get<double>();
  const EtaResult got = tpe_eta(FourierTypePair::pauli_xz(2), 2);
  CHECK(got.eta == doctest::Approx(want).epsilon(1e-9));
  CHECK(got.eta <= 1.0);
  CHECK(got.compressed_dim == 28);  // 2 d^2 - d at d = 4
}

TEST_CASE("iteration count formula and boundaries") {
  CHECK(tpe_iterations(0.5, 2, 1, 0.5) == 2);
  // eta = 1/d makes the count collapse to ceil(t + log_d(1/eps))
  for (const auto& [d, t, eps] : std::vector<std::tuple<std::size_t, unsigned, double>>{
           {16, 2, 0.01}, {4, 3, 0.5}, {32, 2, 1.0}}) {
    const double direct =
        static_cast<double>(t) + std::log(1.0 / eps) / std::log(static_cast<double>(d));
    CHECK(tpe_iterations(1.0 / static_cast<double>(d), d, t, eps) ==
          static_cast<unsigned long>(std::ceil(direct - 1e-9)));
  }
  CHECK_THROWS_AS(tpe_iterations(1.0, 2, 1, 0.5), ConfigError);
  CHECK_THROWS_AS(tpe_iterations(1.2, 2, 1, 0.5), ConfigError);
  CHECK_THROWS_AS(tpe_iterations(0.0, 2, 1, 0.5), ConfigError);
  CHECK_THROWS_AS(tpe_iterations(0.5, 2, 1, 0.0), ConfigError);
  CHECK_THROWS_AS(tpe_iterations(0.5, 2, 1, 1.5), ConfigError);
}

TEST_CASE("residual contraction certificate") {
  const MomentOperator p0 = projector_p0(2, 2);
  SUBCASE("haar moment itself certifies zero") {
    CHECK(residual_contraction(p0, p0, 1) <= 1e-9);
    CHECK(residual_contraction(p0, p0, 3) <= 1e-9);
  }
  SUBCASE("vanishing order-one gap certifies zero") {
    const MomentOperator p0_1 = projector_p0(2, 1);
    MomentOperator m;
    m.kind = MomentOperator::Kind::kDense;
    m.d = 2;
    m.t = 1;
    const CMat pe = projector_diag(2, 1).to_dense();
    m.dense = pe * basis_pair_projector(FourierTypePair::fourier(2).matrix(), 1) * pe;
    CHECK(residual_contraction(m, p0_1, 1) <= 1e-9);
  }
  SUBCASE("doubling the iterations squares the certified norm") {
    const MomentOperator pe = projector_diag(2, 2);
    const double r1 = residual_contraction(pe, p0, 1);
    const double r2 = residual_contraction(pe, p0, 2);
    CHECK(r2 == doctest::Approx(r1 * r1 / 4.0).epsilon(1e-9));  // d^t = 4
  }
}

TEST_CASE("gap computation rejects bad inputs") {
  CHECK_THROWS_AS(tpe_eta(FourierTypePair::fourier(32), 3), BudgetError);
  auto tampered = FourierTypePair::fourier(4);
  tampered.shift_theta_for_test(1, 2, 0.2);
  CHECK_THROWS_AS(tpe_eta(tampered, 2), ConfigError);
  CHECK_THROWS_AS(tpe_eta(FourierTypePair::fourier(4), 0), ConfigError);
}
