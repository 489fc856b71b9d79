#include "udesign/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "udesign/fourier_pair.hpp"
#include "udesign/local_perm.hpp"
#include "udesign/moment_ops.hpp"
#include "udesign/parallel.hpp"
#include "udesign/tpe.hpp"

namespace udesign {

namespace {

constexpr unsigned kIndicatorBits = 26;   // diagonal-moment label budget
constexpr std::size_t kDenseDim = 8192;   // dense circuit-moment budget
constexpr std::size_t kSampleDim = 1024;  // statevector budget

double factorial_d(unsigned t) {
  double f = 1;
  for (unsigned i = 2; i <= t; ++i) f *= i;
  return f;
}

// Per-gate per-matrix signatures: two matrices get the same layer factor
// from a gate iff their signatures match.  Continuous gates use the id of
// the restricted sorted row multiset; discrete gates use the column weights
// mod a and the joint pair count mod b.
std::vector<std::uint32_t> gate_signatures(const GateSpec& gate, unsigned n, unsigned t) {
  const std::uint64_t total = 1ull << (static_cast<std::uint64_t>(t) * n);
  std::vector<std::uint32_t> sig(total);
  if (gate.discrete) {
    const unsigned i = gate.set[0], j = gate.set[1];
    for (std::uint64_t code = 0; code < total; ++code) {
      const BinaryMatrix m = BinaryMatrix::from_code(t, n, code);
      unsigned wi = 0, wj = 0, cij = 0;
      for (unsigned s = 0; s < t; ++s) {
        const bool bi = m.bit(s, i), bj = m.bit(s, j);
        wi += bi ? 1 : 0;
        wj += bj ? 1 : 0;
        cij += (bi && bj) ? 1 : 0;
      }
      sig[code] = ((wi % gate.a) << 16) | ((wj % gate.a) << 8) | (cij % gate.b);
    }
  } else {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    for (std::uint64_t code = 0; code < total; ++code) {
      const BinaryMatrix m = BinaryMatrix::from_code(t, n, code);
      const auto omega = canonical_omega(m, gate.set);
      const auto [it, fresh] = ids.try_emplace(omega, static_cast<std::uint32_t>(ids.size()));
      sig[code] = it->second;
      (void)fresh;
    }
  }
  return sig;
}

void apply_diag(const std::vector<double>& diag, CVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] *= diag[static_cast<std::size_t>(i)];
}

}  // namespace

CircuitSpec CircuitSpec::continuous(unsigned n, const IndexFamily& fam, unsigned ell) {
  if (fam.n() != n) throw ConfigError("index family width does not match the qubit count");
  CircuitSpec spec;
  spec.n = n;
  spec.ell = ell;
  for (const auto& set : fam.sets()) spec.gates.push_back(GateSpec{set, false, 0, 0});
  spec.validate();
  return spec;
}

CircuitSpec CircuitSpec::discrete_pairs(unsigned n, unsigned a, unsigned b, unsigned ell) {
  CircuitSpec spec;
  spec.n = n;
  spec.ell = ell;
  const IndexFamily fam = IndexFamily::all_subsets_of_size(n, 2);
  for (const auto& set : fam.sets()) spec.gates.push_back(GateSpec{set, true, a, b});
  spec.validate();
  return spec;
}

IndexFamily CircuitSpec::family() const {
  if (gates.empty()) throw ConfigError("a gate-free circuit induces no index family");
  std::vector<std::vector<unsigned>> sets;
  for (const auto& gate : gates)
    if (std::find(sets.begin(), sets.end(), gate.set) == sets.end()) sets.push_back(gate.set);
  return IndexFamily(n, std::move(sets));
}

void CircuitSpec::validate() const {
  if (n == 0 || n > 26) throw ConfigError("qubit count out of range");
  // An empty gate list is legal: the circuit degenerates to the identity.
  for (const auto& gate : gates) {
    if (gate.set.empty()) throw ConfigError("gate index set must be nonempty");
    for (size_t i = 0; i < gate.set.size(); ++i) {
      if (gate.set[i] == 0 || gate.set[i] > n) throw ConfigError("gate position out of range");
      if (i && gate.set[i] <= gate.set[i - 1])
        throw ConfigError("gate positions must be strictly ascending");
    }
    if (gate.discrete) {
      if (gate.set.size() != 2) throw ConfigError("discrete gates act on exactly two qubits");
      if (gate.a == 0 || gate.b == 0) throw ConfigError("discrete grids need a, b >= 1");
      if (gate.a > 255 || gate.b > 255) throw ConfigError("discrete grid size out of range");
    }
  }
}

json CircuitSpec::to_json() const {
  json gs = json::array();
  for (const auto& gate : gates) {
    json g{{"set", gate.set}};
    if (gate.discrete) {
      g["model"] = "discrete";
      g["a"] = gate.a;
      g["b"] = gate.b;
    } else {
      g["model"] = "continuous";
    }
    gs.push_back(std::move(g));
  }
  return json{{"n", n}, {"ell", ell}, {"gates", std::move(gs)}};
}

CircuitSpec CircuitSpec::from_json(const json& j) {
  CircuitSpec spec;
  try {
    spec.n = j.at("n").get<unsigned>();
    spec.ell = j.value("ell", 1u);
    for (const auto& g : j.at("gates")) {
      GateSpec gate;
      gate.set = g.at("set").get<std::vector<unsigned>>();
      const std::string model = g.value("model", std::string("continuous"));
      if (model == "discrete") {
        gate.discrete = true;
        gate.a = g.at("a").get<unsigned>();
        gate.b = g.at("b").get<unsigned>();
      } else if (model != "continuous") {
        throw ConfigError("unknown phase model: " + model);
      }
      spec.gates.push_back(std::move(gate));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad circuit document: ") + e.what());
  }
  spec.validate();
  return spec;
}

DiagonalMoment::DiagonalMoment(unsigned n, unsigned t, std::vector<double> diag)
    : n_(n), t_(t), diag_(std::move(diag)) {
  if (diag_.size() != (1ull << (2ull * t * n)))
    throw ConfigError("diagonal length does not match the label space");
}

double DiagonalMoment::value(const BinaryMatrix& k, const BinaryMatrix& kp) const {
  if (k.rows() != t_ || k.cols() != n_ || kp.rows() != t_ || kp.cols() != n_)
    throw ConfigError("label dimensions do not match the moment");
  return diag_[(k.code() << (t_ * n_)) | kp.code()];
}

double DiagonalMoment::trace() const {
  double sum = 0;
  for (double v : diag_) sum += v;
  return sum;
}

bool DiagonalMoment::swap_symmetric() const {
  const std::uint64_t half = 1ull << (t_ * n_);
  for (std::uint64_t a = 0; a < half; ++a)
    for (std::uint64_t b = a + 1; b < half; ++b)
      if (diag_[(a << (t_ * n_)) | b] != diag_[(b << (t_ * n_)) | a]) return false;
  return true;
}

std::vector<std::pair<double, std::uint64_t>> DiagonalMoment::run_length_encoded() const {
  std::vector<std::pair<double, std::uint64_t>> runs;
  for (double v : diag_) {
    if (!runs.empty() && runs.back().first == v)
      ++runs.back().second;
    else
      runs.emplace_back(v, 1);
  }
  return runs;
}

DiagonalMoment DiagonalMoment::from_run_length(
    unsigned n, unsigned t, const std::vector<std::pair<double, std::uint64_t>>& runs) {
  std::vector<double> diag;
  for (const auto& [v, len] : runs) diag.insert(diag.end(), len, v);
  return DiagonalMoment(n, t, std::move(diag));
}

DiagonalMoment rdc_moment(const CircuitSpec& spec, unsigned t, unsigned threads) {
  spec.validate();
  if (t == 0) throw ConfigError("moment order must be positive");
  if (2ull * t * spec.n > kIndicatorBits)
    throw BudgetError("label space exceeds the diagonal-moment budget");

  const std::uint64_t half = 1ull << (static_cast<std::uint64_t>(t) * spec.n);
  std::vector<std::vector<std::uint32_t>> sig;
  sig.reserve(spec.gates.size());
  for (const auto& gate : spec.gates) sig.push_back(gate_signatures(gate, spec.n, t));

  std::vector<double> diag(half * half);
  ThreadPool pool(threads);
  pool.run_indexed(half, [&](std::size_t a) {
    for (std::uint64_t b = 0; b < half; ++b) {
      double v = 1;
      for (const auto& s : sig)
        if (s[a] != s[b]) {
          v = 0;
          break;
        }
      diag[(static_cast<std::uint64_t>(a) << (t * spec.n)) | b] = v;
    }
  });
  return DiagonalMoment(spec.n, t, std::move(diag));
}

EtaTildeResult eta_tilde(const CircuitSpec& spec, unsigned t, unsigned threads) {
  spec.validate();
  const std::size_t dim = checked_pow(2, 2 * t * spec.n);
  if (dim > kDenseDim) throw BudgetError("circuit moment exceeds the dense budget");

  const DiagonalMoment qz = rdc_moment(spec, t, threads);
  const std::size_t d = checked_pow(2, spec.n);
  const CMat p0 = projector_p0(d, t).dense;

  const auto apply = [&](const CVec& in, CVec& out) {
    CVec v = in;
    apply_diag(qz.diag(), v);  // Q_Z
    fwht(v);                   // orthonormal H over all 2tn label bits
    apply_diag(qz.diag(), v);  //   ... so this sandwich is Q_X = H Q_Z H
    fwht(v);
    apply_diag(qz.diag(), v);  // Q_Z
    out = v - p0 * in;
  };

  EtaTildeResult res;
  res.eta_tilde_exact = operator_norm_hermitian(apply, static_cast<Eigen::Index>(dim));

  res.eta_ideal = tpe_eta(FourierTypePair::pauli_xz(spec.n), t, threads).eta;
  res.lambda = lambda_count(t, spec.n, spec.family(), threads);
  const double defect =
      static_cast<double>(res.lambda) / static_cast<double>(checked_pow(2, t * spec.n));
  res.defect_bound = res.eta_ideal + 3.0 * factorial_d(t) * defect + defect * defect;

  if (res.defect_bound < 1.0 && res.eta_tilde_exact > res.defect_bound + 1e-9)
    throw ConvergenceError("exact circuit gap exceeds its bound; inconsistent computation");
  return res;
}

ResourceCount resource_count(unsigned n, unsigned t, double eps) {
  if (n < 2) throw ConfigError("resource counts need at least two qubits");
  if (t == 0) throw ConfigError("moment order must be positive");
  if (!(eps > 0.0) || eps > 1.0) throw ConfigError("accuracy must lie in (0, 1]");

  ResourceCount rc;
  const double v = t + std::log2(1.0 / eps) / n;
  const double rounded = std::round(v);
  rc.repetitions = static_cast<std::uint64_t>(
      std::abs(v - rounded) < 1e-9 ? rounded : std::ceil(v));
  if (rc.repetitions == 0) rc.repetitions = 1;

  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  rc.diagonal_gates = (2 * rc.repetitions + 1) * pairs;
  rc.hadamard_layers = 2 * rc.repetitions;

  const auto ceil_log2 = [](unsigned m) {
    unsigned bits = 0;
    while ((1u << bits) < m) ++bits;
    return bits;
  };
  rc.bits_per_gate = 2 * ceil_log2(t + 1) + ceil_log2(t / 2 + 1);
  rc.bits_per_gate_real = 2.0 * std::log2(t + 1.0) + std::log2(t / 2 + 1.0);
  rc.bits_per_gate_bound = 3.0 * std::log2(t + 1.0);
  rc.random_bits = rc.diagonal_gates * rc.bits_per_gate;
  rc.random_bits_real = static_cast<double>(rc.diagonal_gates) * rc.bits_per_gate_real;
  rc.integer_exceeds_real_bound = rc.bits_per_gate > rc.bits_per_gate_bound;
  return rc;
}

CMat sample_circuit(const CircuitSpec& spec, RandomSource& rng) {
  spec.validate();
  const std::size_t dim = checked_pow(2, spec.n);
  if (dim > kSampleDim) throw BudgetError("statevector dimension exceeds the budget");

  const auto sample_layer = [&]() {
    CVec phase = CVec::Zero(static_cast<Eigen::Index>(dim));
    RVec acc = RVec::Zero(static_cast<Eigen::Index>(dim));
    for (const auto& gate : spec.gates) {
      const unsigned width = static_cast<unsigned>(gate.set.size());
      if (gate.discrete) {
        const double f1 = 2.0 * std::numbers::pi * static_cast<double>(rng.uniform_int(gate.a)) /
                          gate.a;
        const double f2 = 2.0 * std::numbers::pi * static_cast<double>(rng.uniform_int(gate.a)) /
                          gate.a;
        const double th = 2.0 * std::numbers::pi * static_cast<double>(rng.uniform_int(gate.b)) /
                          gate.b;
        for (std::size_t y = 0; y < dim; ++y) {
          const bool bi = (y >> (spec.n - gate.set[0])) & 1u;
          const bool bj = (y >> (spec.n - gate.set[1])) & 1u;
          acc[static_cast<Eigen::Index>(y)] +=
              (bi ? f1 : 0.0) + (bj ? f2 : 0.0) + ((bi && bj) ? th : 0.0);
        }
      } else {
        std::vector<double> phi(1u << width);
        for (double& p : phi) p = 2.0 * std::numbers::pi * rng.uniform();
        for (std::size_t y = 0; y < dim; ++y) {
          std::uint32_t restricted = 0;
          for (unsigned pos : gate.set)
            restricted = (restricted << 1) | ((y >> (spec.n - pos)) & 1u);
          acc[static_cast<Eigen::Index>(y)] += phi[restricted];
        }
      }
    }
    for (std::size_t y = 0; y < dim; ++y)
      phase[static_cast<Eigen::Index>(y)] = std::polar(1.0, acc[static_cast<Eigen::Index>(y)]);
    return phase;
  };

  CMat u = sample_layer().asDiagonal();
  for (unsigned rep = 0; rep < spec.ell; ++rep) {
    fwht_columns(u);  // global Hadamard layer
    u = sample_layer().asDiagonal() * u;
    fwht_columns(u);
    u = sample_layer().asDiagonal() * u;
  }
  return u;
}

CMat circuit_iterated_moment_dense(const CircuitSpec& spec, unsigned t) {
  spec.validate();
  const std::size_t dim = checked_pow(2, 2 * t * spec.n);
  if (dim > kDenseDim) throw BudgetError("circuit moment exceeds the dense budget");
  const DiagonalMoment qz = rdc_moment(spec, t);

  CMat m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    CVec v = CVec::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(col)] = 1.0;
    apply_diag(qz.diag(), v);
    for (unsigned rep = 0; rep < spec.ell; ++rep) {
      fwht(v);
      apply_diag(qz.diag(), v);
      fwht(v);
      apply_diag(qz.diag(), v);
    }
    m.col(static_cast<Eigen::Index>(col)) = v;
  }
  return m;
}

}  // namespace udesign
