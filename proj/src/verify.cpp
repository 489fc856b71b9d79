#include "udesign/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <map>
#include <ostream>
#include <sstream>

#include "udesign/binary_matrix.hpp"
#include "udesign/circuits.hpp"
#include "udesign/fourier_pair.hpp"
#include "udesign/hamiltonian.hpp"
#include "udesign/local_perm.hpp"
#include "udesign/moment_ops.hpp"
#include "udesign/orthogonal_extension.hpp"
#include "udesign/rng.hpp"
#include "udesign/tpe.hpp"

namespace udesign {

namespace {

using Clock = std::chrono::steady_clock;

struct RowTimer {
  Clock::time_point t0 = Clock::now();
  double ms() const { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }
};

// Uniform pass convention: value <= bound + tolerance (bounded rows), else
// the caller supplies the verdict for structural checks.
CheckEntry row(std::string id, std::string detail, int criterion, double value,
               std::optional<double> bound, double tolerance, const RowTimer& timer) {
  CheckEntry e;
  e.id = std::move(id);
  e.detail = std::move(detail);
  e.criterion = criterion;
  e.value = value;
  e.bound = bound;
  e.tolerance = tolerance;
  e.pass = !bound || value <= *bound + tolerance;
  e.wall_ms = timer.ms();
  return e;
}

bool bitwise_equal(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(),
                     sizeof(std::complex<double>) * static_cast<std::size_t>(a.size())) == 0;
}

// Integer column Gram key (upper triangle, row-major) of a binary matrix;
// key equality is exactly the condition for an orthogonal extension.
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

void check_haar_moment(const VerifyOptions& o, Report& rep) {
  const std::size_t samples = o.small_budget ? 20000 : 100000;
  // 5e-3 is the acceptance budget at 1e5 samples; a reduced smoke budget
  // scales it by 1/sqrt(sample ratio) so the statistical strength is kept.
  const double tol = 5e-3 * std::sqrt(100000.0 / static_cast<double>(samples));
  for (auto [d, t] : {std::pair<std::size_t, unsigned>{2, 1}, {2, 2}, {3, 2}}) {
    RowTimer timer;
    const CMat avg = mc_haar_moment(d, t, samples, o.seed, o.threads);
    const CMat p0 = projector_p0(d, t).dense;
    const double dev = (avg - p0).cwiseAbs().maxCoeff();
    rep.checks.push_back(row(
        "haar-moment-mc-d" + std::to_string(d) + "-t" + std::to_string(t),
        "entrywise distance of the sampled tensor-power average from the design projector (" +
            std::to_string(samples) + " samples)",
        1, dev, tol, 0.0, timer));
  }
}

void check_fourier_gap(const VerifyOptions& o, Report& rep) {
  std::map<std::size_t, double> eta;
  for (std::size_t d : {std::size_t{16}, std::size_t{32}}) {
    RowTimer timer;
    const EtaResult res = tpe_eta(FourierTypePair::fourier(d), 2, o.threads);
    eta[d] = res.eta;
    // The leading-order bound 24/d is vacuous (>= 1) at d = 16; the row is
    // then informational and judged only through the monotonicity row.
    rep.checks.push_back(row("fourier-eta-d" + std::to_string(d),
                             "exact order-two gap of the discrete-Fourier basis pair",
                             2, res.eta, res.bound, 0.0, timer));
  }
  RowTimer timer;
  rep.checks.push_back(row("fourier-eta-monotone",
                           "gap at dimension 32 minus gap at dimension 16 (must shrink)",
                           2, eta[32] - eta[16], 0.0, 0.0, timer));
  rep.checks.back().pass = eta[32] < eta[16];
}

void check_first_order(const VerifyOptions& o, Report& rep) {
  for (std::size_t d = 2; d <= 8; ++d) {
    RowTimer timer;
    const double eta = tpe_eta(FourierTypePair::fourier(d), 1, o.threads).eta;
    rep.checks.push_back(row("first-order-fourier-d" + std::to_string(d),
                             "order-one gap of the discrete-Fourier pair (exact ensembles "
                             "average the first moment perfectly)",
                             3, eta, 0.0, 1e-10, timer));
  }
  for (unsigned n = 1; n <= 3; ++n) {
    RowTimer timer;
    const double eta = tpe_eta(FourierTypePair::pauli_xz(n), 1, o.threads).eta;
    rep.checks.push_back(row("first-order-xz-n" + std::to_string(n),
                             "order-one gap of the X/Z conjugate pair", 3, eta, 0.0,
                             1e-10, timer));
  }
}

void check_defect_census(const VerifyOptions& o, Report& rep) {
  // Orders two and three: no pairwise-local defects up to width four.
  for (unsigned t : {2u, 3u})
    for (unsigned n = 2; n <= 4; ++n) {
      RowTimer timer;
      const auto fam = IndexFamily::all_subsets_of_size(n, 2);
      const auto c = static_cast<double>(lambda_count(t, n, fam, o.threads));
      rep.checks.push_back(row(
          "defect-count-t" + std::to_string(t) + "-n" + std::to_string(n),
          "pairwise-local non-permutation pair count (zero through order three)", 4, c,
          0.0, 0.0, timer));
    }

  // Order four: oracle agreement, growth bounds, column structure.
  for (unsigned n = 2; n <= 3; ++n) {
    const auto fam = IndexFamily::all_subsets_of_size(n, 2);
    RowTimer timer;
    const std::uint64_t c = lambda_count(4, n, fam, o.threads);
    const double bound = std::min(576.0 * std::pow(8.0, n),    // (4!)^2 8^n
                                  std::pow(2.0, 32.0 + 3.0 * n));  // 2^(2t^2+(t-1)n)
    std::string detail = "order-four defect count against both growth bounds";
    if (n == 2)
      // The pairwise family at width two contains only the full index set,
      // and multiset row agreement on the full width is exactly
      // row-permutation equivalence, so this count is identically zero; a
      // positive expectation at this width is unsatisfiable (see the
      // acceptance gate's analysis).
      detail += "; provably zero at width two where pairwise locality is full-width";
    rep.checks.push_back(row("defect-count-t4-n" + std::to_string(n), detail, 4,
                             static_cast<double>(c), bound, 0.0, timer));

    if (n == 2) {
      RowTimer tmr;
      const std::uint64_t naive = lambda_count_naive(4, n, fam);
      rep.checks.push_back(
          row("defect-oracle-t4-n2",
              "absolute difference between the bucketed count and the exhaustive "
              "pair-loop oracle",
              4, std::abs(static_cast<double>(c) - static_cast<double>(naive)), 0.0, 0.0,
              tmr));
    } else {
      RowTimer tmr;
      rep.checks.push_back(row("defect-positive-t4-n3",
                               "order-four defects appear from width three on "
                               "(value is the count, must be positive)",
                               4, static_cast<double>(c), std::nullopt, 0.0, tmr));
      rep.checks.back().pass = c > 0;
    }

    RowTimer tmr;
    const auto pairs = counted_pairs(4, n, fam);
    std::size_t bad_form = 0;
    for (const auto& [k, kp] : pairs)
      if (!c0c1_column_form(k, kp)) ++bad_form;
    rep.checks.push_back(row("defect-column-form-t4-n" + std::to_string(n),
                             "counted pairs violating the equal-or-swapped column "
                             "characterization",
                             4, static_cast<double>(bad_form), 0.0, 0.0, tmr));
  }
}

void check_grid_threshold(const VerifyOptions& o, Report& rep) {
  for (auto [n, t] : {std::pair<unsigned, unsigned>{2, 2}, {3, 2}, {2, 3}}) {
    RowTimer timer;
    const auto fam = IndexFamily::all_subsets_of_size(n, 2);
    const auto cont = rdc_moment(CircuitSpec::continuous(n, fam), t, o.threads);
    const auto disc =
        rdc_moment(CircuitSpec::discrete_pairs(n, t + 1, t / 2 + 1), t, o.threads);
    double dev = 0;
    for (std::size_t i = 0; i < cont.dim(); ++i)
      dev = std::max(dev, std::abs(cont.diag()[i] - disc.diag()[i]));
    rep.checks.push_back(
        row("grid-threshold-n" + std::to_string(n) + "-t" + std::to_string(t),
            "entrywise gap between continuous and threshold-grid diagonal averages", 5,
            dev, 0.0, 1e-12, timer));
  }
}

void check_gap_bound(const VerifyOptions& o, Report& rep) {
  const std::pair<const char*, IndexFamily> families[] = {
      {"pairwise", IndexFamily::all_subsets_of_size(3, 2)},
      {"full-width", IndexFamily::full_width(3)}};
  for (const auto& [label, fam] : families) {
    RowTimer timer;
    const EtaTildeResult res = eta_tilde(CircuitSpec::continuous(3, fam), 2, o.threads);
    // The pairwise family has no defects at this shape, so the exact gap
    // sits on the bound; 1e-9 covers eigensolver rounding on both sides.
    rep.checks.push_back(row(std::string("gap-bound-") + label,
                             "exact three-layer gap minus its defect-corrected bound",
                             6, res.eta_tilde_exact - res.defect_bound, 0.0, 1e-9,
                             timer));
  }
}

void check_hypercube_cap(const VerifyOptions& o, Report& rep) {
  const unsigned n_max = o.small_budget ? 2 : 3;
  for (unsigned n = 1; n <= n_max; ++n) {
    RowTimer timer;
    std::map<std::vector<int>, std::vector<std::uint64_t>> buckets;
    const std::uint64_t total = 1ull << (4 * n);
    for (std::uint64_t code = 0; code < total; ++code)
      buckets[gram_key(BinaryMatrix::from_code(4, n, code))].push_back(code);

    std::uint64_t perm_ext = 0, nonperm_ext = 0, violations = 0, worst_kept = 0;
    for (const auto& [key, codes] : buckets)
      for (std::uint64_t ca : codes)
        for (std::uint64_t cb : codes) {
          const auto a = BinaryMatrix::from_code(4, n, ca);
          const auto b = BinaryMatrix::from_code(4, n, cb);
          const auto ortho = partial_isometry(a, b);
          if (!ortho) {
            ++violations;  // equal Grams must always extend
            continue;
          }
          const std::uint64_t kept = hypercube_preserved_count(*ortho);
          if (ortho->is_permutation()) {
            ++perm_ext;
            if (kept != 16 || !is_row_permutation(a, b)) ++violations;
          } else {
            ++nonperm_ext;
            worst_kept = std::max(worst_kept, kept);
            if (kept > 8) ++violations;
          }
        }
    rep.checks.push_back(row(
        "hypercube-cap-n" + std::to_string(n),
        "largest vertex count kept by a non-permutation extension (" +
            std::to_string(nonperm_ext) + " of them; " + std::to_string(perm_ext) +
            " permutation extensions keep all 16; " + std::to_string(violations) +
            " violations)",
        7, static_cast<double>(worst_kept), 8.0, 0.0, timer));
    rep.checks.back().pass =
        violations == 0 && perm_ext > 0 && worst_kept <= 8;
  }
}

void check_corner_phases(const VerifyOptions&, Report& rep) {
  for (unsigned t = 1; t <= 6; ++t) {
    RowTimer timer;
    rep.checks.push_back(
        row("corner-phase-t" + std::to_string(t),
            "residual of the local-corner and controlled-phase split over the whole "
            "parameter grid",
            8, phase_decomposition_max_residual(t), 0.0, 1e-12, timer));
  }
}

void check_alternating_moment(const VerifyOptions& o, Report& rep) {
  using Shape = std::array<unsigned, 3>;
  const std::vector<Shape> shapes =
      o.small_budget ? std::vector<Shape>{{2, 2, 1}, {2, 2, 2}}
                     : std::vector<Shape>{{2, 2, 1}, {3, 2, 1}, {2, 2, 2}};
  for (const auto& [n, t, ell] : shapes) {
    RowTimer timer;
    const unsigned b = t / 2 + 1;
    const CMat m = hamiltonian_moment(n, t, ell, o.threads);
    const CMat c =
        circuit_iterated_moment_dense(CircuitSpec::discrete_pairs(n, 2 * b, b, ell), t);
    rep.checks.push_back(row("alternating-moment-n" + std::to_string(n) + "-t" +
                                 std::to_string(t) + "-ell" + std::to_string(ell),
                             "entrywise gap between the grid-averaged evolution moment "
                             "and the iterated circuit moment",
                             9, (m - c).cwiseAbs().maxCoeff(), 0.0, 1e-10, timer));
  }
}

void check_design_certificate(const VerifyOptions& o, Report& rep) {
  const unsigned n = o.small_budget ? 2 : 3;
  const unsigned t = 2;
  const auto ell = static_cast<unsigned>(resource_count(n, t, 1.0).repetitions);
  RowTimer timer;
  const CMat m = hamiltonian_moment(n, t, ell, o.threads);
  const CMat p0 = projector_p0(checked_pow(2, n), t).dense;

  const double fixed_point =
      std::max((p0 * m - p0).cwiseAbs().maxCoeff(), (m * p0 - p0).cwiseAbs().maxCoeff());
  rep.checks.push_back(row("design-projector-fixed-n" + std::to_string(n),
                           "the exact moment fixes the design projector on both sides",
                           9, fixed_point, 0.0, 1e-12, timer));

  RowTimer tmr;
  CMat compressed = m - p0 * m;
  compressed -= CMat(compressed * p0);
  const double dt = std::pow(2.0, static_cast<double>(t) * n);
  // The certificate sits exactly on its boundary at these shapes (the
  // residual norm is a negative power of two); the power iteration
  // approaches it from below and 1e-9 covers rounding.
  rep.checks.push_back(
      row("design-certificate-n" + std::to_string(n) + "-t" + std::to_string(t),
          "dimension-scaled compressed residual at the threshold repetition count ell=" +
              std::to_string(ell),
          9, dt * operator_norm(compressed), 1.0, 1e-9, tmr));
}

void check_block_decomposition(const VerifyOptions& o, Report& rep) {
  const std::size_t samples = o.small_budget ? 25 : 100;
  for (auto [d, t] : {std::pair<std::size_t, unsigned>{2, 2}, {3, 2}, {2, 3}}) {
    RowTimer timer;
    RandomSource rng = RandomSource(o.seed).substream(8 * d + t);
    double worst = 0;
    for (std::size_t i = 0; i < samples; ++i)
      worst = std::max(worst, block_decomposition_residual(haar_unitary(d, rng), t));
    rep.checks.push_back(row(
        "block-decomposition-d" + std::to_string(d) + "-t" + std::to_string(t),
        "worst residual of the projector-plus-compression split over " +
            std::to_string(samples) + " sampled unitaries",
        10, worst, 0.0, 1e-9, timer));
  }
}

void check_determinism(const VerifyOptions& o, Report& rep) {
  const std::size_t samples = o.small_budget ? 5000 : 20000;
  const auto fam = IndexFamily::all_subsets_of_size(3, 2);

  RowTimer t1;
  const bool mc_equal = bitwise_equal(mc_haar_moment(3, 2, samples, o.seed, 1),
                                      mc_haar_moment(3, 2, samples, o.seed, 2));
  rep.checks.push_back(row("determinism-sampled-moment",
                           "sampled moment averages are bitwise equal across thread "
                           "counts (" + std::to_string(samples) + " samples)",
                           11, mc_equal ? 0.0 : 1.0, 0.0, 0.0, t1));

  RowTimer t2;
  const bool census_equal = lambda_count(4, 3, fam, 1) == lambda_count(4, 3, fam, 2);
  rep.checks.push_back(row("determinism-defect-census",
                           "defect counts agree across thread counts", 11,
                           census_equal ? 0.0 : 1.0, 0.0, 0.0, t2));

  RowTimer t3;
  const CircuitSpec spec = CircuitSpec::continuous(3, fam);
  const bool diag_equal = rdc_moment(spec, 2, 1).diag() == rdc_moment(spec, 2, 2).diag();
  rep.checks.push_back(row("determinism-diagonal-moment",
                           "diagonal layer averages are bitwise equal across thread "
                           "counts",
                           11, diag_equal ? 0.0 : 1.0, 0.0, 0.0, t3));

  RowTimer t4;
  const bool grid_equal =
      bitwise_equal(hamiltonian_moment(2, 2, 1, 1), hamiltonian_moment(2, 2, 1, 2));
  rep.checks.push_back(row("determinism-grid-average",
                           "grid-averaged evolution moments are bitwise equal across "
                           "thread counts",
                           11, grid_equal ? 0.0 : 1.0, 0.0, 0.0, t4));
}

}  // namespace

double block_decomposition_residual(const CMat& u, unsigned t) {
  const auto d = static_cast<std::size_t>(u.rows());
  const CMat e = tensor_power_conj(u, t);
  const CMat p0 = projector_p0(d, t).dense;
  // E - P0 - (I-P0) E (I-P0) collapses to P0 E + E P0 - P0 E P0 - P0.
  const CMat pe = p0 * e;
  const CMat res = pe + e * p0 - pe * p0 - p0;
  return operator_norm(res);
}

const std::vector<Verification>& verification_checks() {
  static const std::vector<Verification> entries = {
      {"haar-moment-projector", {1}, check_haar_moment},
      {"paired-basis-gap-bound", {2}, check_fourier_gap},
      {"first-order-exactness", {3}, check_first_order},
      {"locality-defect-census", {4}, check_defect_census},
      {"grid-threshold-equality", {5}, check_grid_threshold},
      {"three-layer-gap-bound", {6}, check_gap_bound},
      {"gram-pair-hypercube-cap", {7}, check_hypercube_cap},
      {"corner-phase-identity", {8}, check_corner_phases},
      {"alternating-moment-equality", {9}, check_alternating_moment},
      {"design-certificate", {9}, check_design_certificate},
      {"block-decomposition-identity", {10}, check_block_decomposition},
      {"numeric-determinism", {11}, check_determinism},
  };
  return entries;
}

Report run_verification(const VerifyOptions& opt, std::ostream* progress) {
  Report rep;
  rep.command = "verify-all";
  rep.parameters = json{{"budget", opt.small_budget ? "small" : "full"}};
  rep.seed = opt.seed;
  rep.threads = opt.threads;
  rep.fixture_hash = file_hash(fixture_path("golden.json"));

  const auto& entries = verification_checks();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (progress)
      (*progress) << "[" << (i + 1) << "/" << entries.size() << "] " << entries[i].name
                  << "..." << std::flush;
    const std::size_t before = rep.checks.size();
    const RowTimer timer;
    entries[i].run(opt, rep);
    bool ok = true;
    for (std::size_t k = before; k < rep.checks.size(); ++k) ok = ok && rep.checks[k].pass;
    if (progress)
      (*progress) << (ok ? " ok" : " FAIL") << " (" << timer.ms() / 1000.0 << " s)\n";
  }
  return rep;
}

}  // namespace udesign
