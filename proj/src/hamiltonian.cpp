#include "udesign/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "udesign/circuits.hpp"
#include "udesign/local_perm.hpp"
#include "udesign/moment_ops.hpp"
#include "udesign/parallel.hpp"

namespace udesign {

namespace {

constexpr std::size_t kEvolveDim = 1024;  // statevector budget
constexpr std::size_t kDenseDim = 8192;   // dense moment budget
constexpr double kGridTol = 1e-12;        // membership tolerance for double-valued tables

using std::numbers::pi;

unsigned half_block(unsigned t) { return t / 2 + 1; }  // grid denominator is twice this

BigRat rat_mod1(const BigRat& x) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = numerator(x), den = denominator(x);  // den > 0 in canonical form
  const cpp_int m = ((num % den) + den) % den;
  return BigRat(m, den);
}

std::uint64_t pair_count(unsigned n) { return std::uint64_t{n} * (n - 1) / 2; }

// Phase-per-unit-time table over computational labels:
//   theta(z) = sum_{k<k'} J_{kk'} s_k s_k' + sum_k B_k s_k,  s_k = (-1)^{bit k}.
std::vector<double> phase_table(unsigned n, const IntervalParams& p) {
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> theta(dim, 0.0);
  for (std::size_t z = 0; z < dim; ++z) {
    double sign[32];
    for (unsigned k = 1; k <= n; ++k) sign[k] = ((z >> (n - k)) & 1u) ? -1.0 : 1.0;
    double v = 0;
    std::size_t p_idx = 0;
    for (unsigned k = 1; k <= n; ++k)
      for (unsigned kp = k + 1; kp <= n; ++kp) v += p.couplings[p_idx++] * sign[k] * sign[kp];
    for (unsigned k = 1; k <= n; ++k) v += p.fields[k - 1] * sign[k];
    theta[z] = v;
  }
  return theta;
}

void check_on_grid(const std::vector<double>& values, const std::vector<double>& grid,
                   const char* what) {
  for (double v : values) {
    bool found = false;
    for (double g : grid)
      if (std::abs(v - g) <= kGridTol) {
        found = true;
        break;
      }
    if (!found) throw ConfigError(std::string(what) + " value off the declared grid");
  }
}

struct GridPair {
  std::vector<double> couplings;
  std::vector<double> fields;
};

GridPair schedule_grids(unsigned t, ScheduleGrid grid) {
  switch (grid) {
    case ScheduleGrid::proof:
      return {ParameterGrid::proof_couplings(t).doubles(),
              ParameterGrid::proof_fields(t).doubles()};
    case ScheduleGrid::symmetric_integer:
    case ScheduleGrid::symmetric_half: {
      const GridReading r = grid == ScheduleGrid::symmetric_integer ? GridReading::integer
                                                                    : GridReading::half_integer;
      const BigRat j_width(t / 2, 2);                      // floor(t/2)/2
      const BigRat b_width = BigRat(t / 2) + BigRat(1, 2);  // floor(t/2)+1/2
      return {ParameterGrid::symmetric(t, j_width, r).doubles(),
              ParameterGrid::symmetric(t, b_width, r).doubles()};
    }
  }
  throw ConfigError("unknown schedule grid");
}

const char* grid_name(ScheduleGrid grid) {
  switch (grid) {
    case ScheduleGrid::proof:
      return "proof";
    case ScheduleGrid::symmetric_integer:
      return "symmetric-integer";
    case ScheduleGrid::symmetric_half:
      return "symmetric-half";
  }
  return "?";
}

ScheduleGrid grid_from_name(const std::string& name) {
  if (name == "proof") return ScheduleGrid::proof;
  if (name == "symmetric-integer") return ScheduleGrid::symmetric_integer;
  if (name == "symmetric-half") return ScheduleGrid::symmetric_half;
  throw ConfigError("unknown schedule grid: " + name);
}

// Mean of D(tau)^{x t,t} over every proof-grid assignment of one interval,
// as a diagonal over composite labels (K, K').  The average is taken
// literally: enumerate all (2b)^N field and b^P coupling assignments, build
// each diagonal unitary, and average the label products.  This is the
// reference route; the number-theoretic indicator route lives in rdc_moment
// and the two are compared by hamiltonian_moment.
std::vector<std::complex<double>> interval_average_diag(unsigned n, unsigned t, double tau,
                                                        unsigned threads) {
  const unsigned b = half_block(t);
  const unsigned a = 2 * b;
  const std::size_t labels = std::size_t{1} << n;
  const std::uint64_t pairs = pair_count(n);
  std::uint64_t assignments = 1;
  for (unsigned k = 0; k < n; ++k) assignments *= a;
  for (std::uint64_t p = 0; p < pairs; ++p) assignments *= b;

  const std::size_t tn = std::size_t{t} * n;
  const std::size_t half = std::size_t{1} << tn;

  // q[assignment][K]: product of the t row phases of K under that assignment.
  std::vector<std::vector<std::complex<double>>> q(assignments);
  IntervalParams p;
  p.couplings.assign(pairs, 0.0);
  p.fields.assign(n, 0.0);
  for (std::uint64_t idx = 0; idx < assignments; ++idx) {
    std::uint64_t rest = idx;
    for (unsigned k = 0; k < n; ++k) {
      p.fields[k] = static_cast<double>(rest % a) / a;
      rest /= a;
    }
    for (std::uint64_t pr = 0; pr < pairs; ++pr) {
      p.couplings[pr] = static_cast<double>(rest % b) / a;  // m/(2b)
      rest /= b;
    }
    const std::vector<double> theta = phase_table(n, p);
    std::vector<std::complex<double>> phase(labels);
    for (std::size_t z = 0; z < labels; ++z) phase[z] = std::polar(1.0, tau * theta[z]);
    auto& qa = q[idx];
    qa.resize(half);
    for (std::size_t K = 0; K < half; ++K) {
      std::complex<double> v = 1.0;
      for (unsigned s = 0; s < t; ++s) v *= phase[(K >> (s * n)) & (labels - 1)];
      qa[K] = v;
    }
  }

  std::vector<std::complex<double>> diag(half * half);
  ThreadPool pool(threads);
  pool.run_indexed(half, [&](std::size_t K) {
    for (std::size_t Kp = 0; Kp < half; ++Kp) {
      std::complex<double> sum = 0.0;
      for (std::uint64_t idx = 0; idx < assignments; ++idx)
        sum += q[idx][K] * std::conj(q[idx][Kp]);
      diag[(K << tn) | Kp] = sum / static_cast<double>(assignments);
    }
  });
  return diag;
}

void apply_cdiag(const std::vector<std::complex<double>>& diag, CVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] *= diag[static_cast<std::size_t>(i)];
}

CMat dense_alternating_moment(unsigned n, unsigned t, unsigned ell, unsigned threads) {
  const std::size_t dim = checked_pow(2, 2 * t * n);
  if (dim > kDenseDim) throw BudgetError("moment dimension exceeds the dense budget");
  const auto avg = interval_average_diag(n, t, pi, threads);
  CMat m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    CVec v = CVec::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(col)] = 1.0;
    apply_cdiag(avg, v);
    for (unsigned rep = 0; rep < ell; ++rep) {
      fwht(v);
      apply_cdiag(avg, v);
      fwht(v);
      apply_cdiag(avg, v);
    }
    m.col(static_cast<Eigen::Index>(col)) = v;
  }
  return m;
}

}  // namespace

ParameterGrid::ParameterGrid(unsigned t, std::vector<BigRat> values)
    : t_(t), values_(std::move(values)) {
  if (t_ == 0) throw ConfigError("grid order must be positive");
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  if (values_.empty()) throw ConfigError("parameter grid is empty");
}

ParameterGrid ParameterGrid::proof_fields(unsigned t) {
  const unsigned b = half_block(t);
  std::vector<BigRat> vals;
  for (unsigned m = 0; m <= 2 * (t / 2) + 1; ++m) vals.emplace_back(m, 2 * b);
  return ParameterGrid(t, std::move(vals));
}

ParameterGrid ParameterGrid::proof_couplings(unsigned t) {
  const unsigned b = half_block(t);
  std::vector<BigRat> vals;
  for (unsigned m = 0; m <= t / 2; ++m) vals.emplace_back(m, 2 * b);
  return ParameterGrid(t, std::move(vals));
}

ParameterGrid ParameterGrid::symmetric(unsigned t, const BigRat& half_width,
                                       GridReading reading) {
  if (half_width < 0) throw ConfigError("grid half-width must be nonnegative");
  const unsigned b = half_block(t);
  std::vector<BigRat> vals;
  // m runs over integers (or half-integers) in [-half_width, half_width].
  const BigRat step = reading == GridReading::integer ? BigRat(1) : BigRat(1, 2);
  for (BigRat m = 0; m <= half_width; m += step) {
    vals.push_back(m / (2 * b));
    vals.push_back(-m / (2 * b));
  }
  return ParameterGrid(t, std::move(vals));
}

std::vector<double> ParameterGrid::doubles() const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (const auto& v : values_) out.push_back(static_cast<double>(v));
  return out;
}

std::array<BigRat, 3> induced_gate_phases(const BigRat& j, const BigRat& b1, const BigRat& b2) {
  return {rat_mod1(-(j + b1)), rat_mod1(-(j + b2)), rat_mod1(2 * j)};
}

std::vector<std::array<BigRat, 3>> induced_phase_multiset(const ParameterGrid& couplings,
                                                          const ParameterGrid& fields) {
  std::vector<std::array<BigRat, 3>> out;
  out.reserve(couplings.values().size() * fields.values().size() * fields.values().size());
  for (const auto& j : couplings.values())
    for (const auto& b1 : fields.values())
      for (const auto& b2 : fields.values()) out.push_back(induced_gate_phases(j, b1, b2));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::array<BigRat, 3>> discrete_gate_phase_grid(unsigned a, unsigned b) {
  if (a == 0 || b == 0) throw ConfigError("discrete grids need a, b >= 1");
  std::vector<std::array<BigRat, 3>> out;
  out.reserve(std::size_t{a} * a * b);
  for (unsigned m1 = 0; m1 < a; ++m1)
    for (unsigned m2 = 0; m2 < a; ++m2)
      for (unsigned m3 = 0; m3 < b; ++m3)
        out.push_back({BigRat(m1, a), BigRat(m2, a), BigRat(m3, b)});
  std::sort(out.begin(), out.end());
  return out;
}

HamiltonianSchedule HamiltonianSchedule::random(unsigned n, unsigned t, unsigned ell,
                                                RandomSource& rng, ScheduleGrid grid) {
  HamiltonianSchedule s;
  s.n = n;
  s.t = t;
  s.grid = grid;
  const GridPair g = schedule_grids(t, grid);
  const auto draw_interval = [&]() {
    IntervalParams p;
    for (std::uint64_t i = 0; i < pair_count(n); ++i)
      p.couplings.push_back(g.couplings[rng.uniform_int(g.couplings.size())]);
    for (unsigned k = 0; k < n; ++k) p.fields.push_back(g.fields[rng.uniform_int(g.fields.size())]);
    return p;
  };
  for (unsigned m = 0; m <= ell; ++m) {
    s.z_intervals.push_back(draw_interval());
    if (m < ell) s.x_intervals.push_back(draw_interval());
  }
  s.validate();
  return s;
}

void HamiltonianSchedule::validate() const {
  if (n == 0 || n > 26) throw ConfigError("qubit count out of range");
  if (t == 0) throw ConfigError("moment order must be positive");
  if (z_intervals.empty()) throw ConfigError("schedule needs at least one interval");
  if (x_intervals.size() + 1 != z_intervals.size() && x_intervals.size() != z_intervals.size())
    throw ConfigError("intervals must alternate starting and ending with a Z interval");
  const GridPair g = schedule_grids(t, grid);
  for (const auto* list : {&z_intervals, &x_intervals})
    for (const auto& p : *list) {
      if (p.couplings.size() != pair_count(n) || p.fields.size() != n)
        throw ConfigError("interval parameter counts do not match the qubit count");
      check_on_grid(p.couplings, g.couplings, "coupling");
      check_on_grid(p.fields, g.fields, "field");
    }
}

double HamiltonianSchedule::total_time() const {
  return pi * static_cast<double>(z_intervals.size() + x_intervals.size());
}

json HamiltonianSchedule::to_json() const {
  const auto dump = [](const std::vector<IntervalParams>& list) {
    json arr = json::array();
    for (const auto& p : list)
      arr.push_back(json{{"couplings", p.couplings}, {"fields", p.fields}});
    return arr;
  };
  return json{{"n", n},
              {"t", t},
              {"grid", grid_name(grid)},
              {"z_intervals", dump(z_intervals)},
              {"x_intervals", dump(x_intervals)}};
}

HamiltonianSchedule HamiltonianSchedule::from_json(const json& j) {
  try {
    if (j.contains("seed")) {
      RandomSource rng(j.at("seed").get<std::uint64_t>());
      return random(j.at("n").get<unsigned>(), j.at("t").get<unsigned>(),
                    j.at("ell").get<unsigned>(), rng,
                    grid_from_name(j.value("grid", std::string("proof"))));
    }
    HamiltonianSchedule s;
    s.n = j.at("n").get<unsigned>();
    s.t = j.at("t").get<unsigned>();
    s.grid = grid_from_name(j.value("grid", std::string("proof")));
    const auto load = [](const json& arr) {
      std::vector<IntervalParams> list;
      for (const auto& e : arr)
        list.push_back(IntervalParams{e.at("couplings").get<std::vector<double>>(),
                                      e.at("fields").get<std::vector<double>>()});
      return list;
    };
    s.z_intervals = load(j.at("z_intervals"));
    s.x_intervals = load(j.value("x_intervals", json::array()));
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad schedule document: ") + e.what());
  }
}

CMat evolve_window(const HamiltonianSchedule& sched, double t0, double t1) {
  sched.validate();
  const std::size_t dim = checked_pow(2, sched.n);
  if (dim > kEvolveDim) throw BudgetError("statevector dimension exceeds the budget");
  if (t0 < 0 || t1 < t0) throw ConfigError("evolution window must satisfy 0 <= t0 <= t1");
  if (t1 > sched.total_time() + 1e-12) throw ConfigError("schedule ends before the requested time");

  CMat u = CMat::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const std::size_t intervals = sched.z_intervals.size() + sched.x_intervals.size();
  for (std::size_t i = 0; i < intervals; ++i) {
    const double lo = std::max(t0, pi * static_cast<double>(i));
    const double hi = std::min(t1, pi * static_cast<double>(i + 1));
    const double tau = hi - lo;
    if (tau <= 0) continue;
    const bool is_x = (i % 2) == 1;
    const IntervalParams& p =
        is_x ? sched.x_intervals[i / 2] : sched.z_intervals[i / 2];
    const std::vector<double> theta = phase_table(sched.n, p);
    CVec phase(static_cast<Eigen::Index>(dim));
    for (std::size_t z = 0; z < dim; ++z)
      phase[static_cast<Eigen::Index>(z)] = std::polar(1.0, tau * theta[z]);
    if (is_x) fwht_columns(u);
    u = phase.asDiagonal() * u;
    if (is_x) fwht_columns(u);
  }
  return u;
}

CMat evolve(const HamiltonianSchedule& sched, double T) {
  if (T < 0) throw ConfigError("evolution time must be nonnegative");
  return evolve_window(sched, 0.0, T);
}

double phase_decomposition_check(double j, double b1, double b2) {
  const auto zket = [](double phase_turns) {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = std::polar(1.0, pi * phase_turns);
    m(1, 1) = std::polar(1.0, -pi * phase_turns);
    return m;
  };
  CMat zz = CMat::Zero(4, 4);
  zz(0, 0) = zz(3, 3) = std::polar(1.0, pi * j);
  zz(1, 1) = zz(2, 2) = std::polar(1.0, -pi * j);
  const CMat lhs = zz * kron(zket(b1), zket(b2));

  const auto corner = [](double w) {
    CMat m = CMat::Identity(2, 2);
    m(1, 1) = std::polar(1.0, -2.0 * pi * w);
    return m;
  };
  CMat last = CMat::Identity(4, 4);
  last(3, 3) = std::polar(1.0, 4.0 * pi * j);
  const CMat rhs =
      std::polar(1.0, pi * (j + b1 + b2)) * (kron(corner(j + b1), corner(j + b2)) * last);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

double phase_decomposition_max_residual(unsigned t) {
  const auto js = ParameterGrid::proof_couplings(t).doubles();
  const auto bs = ParameterGrid::proof_fields(t).doubles();
  double worst = 0;
  for (double j : js)
    for (double b1 : bs)
      for (double b2 : bs) worst = std::max(worst, phase_decomposition_check(j, b1, b2));
  return worst;
}

CMat hamiltonian_moment(unsigned n, unsigned t, unsigned ell, unsigned threads) {
  if (n < 2) throw ConfigError("the alternating construction needs at least two qubits");
  if (t == 0) throw ConfigError("moment order must be positive");
  const CMat m = dense_alternating_moment(n, t, ell, threads);

  // Safety net: the grid average must coincide with the factored-discrete
  // circuit moment at (a, b) = (2 floor(t/2) + 2, floor(t/2) + 1).
  const unsigned b = half_block(t);
  const CMat circuit =
      circuit_iterated_moment_dense(CircuitSpec::discrete_pairs(n, 2 * b, b, ell), t);
  if ((m - circuit).cwiseAbs().maxCoeff() > 1e-10)
    throw ConvergenceError("grid average disagrees with the discrete circuit moment");
  return m;
}

ClosureResult post_threshold_closure(unsigned n, unsigned t, unsigned ell, double delta,
                                     unsigned threads) {
  if (delta < 0 || delta >= 2 * pi) throw ConfigError("extra time must lie in [0, 2*pi)");
  const CMat m = hamiltonian_moment(n, t, ell, threads);
  const std::size_t dim = static_cast<std::size_t>(m.rows());
  const CMat p0 = projector_p0(checked_pow(2, n), t).dense;

  ClosureResult res;
  res.base_distance = operator_norm(CMat(m - p0));

  // The factor appended after the lattice time: a partial X interval, then
  // (past pi) a partial Z interval, each averaged over its own independent
  // grid assignment.
  const auto x_avg = interval_average_diag(n, t, std::min(delta, pi), threads);
  CMat ext = m;
  for (std::size_t col = 0; col < dim; ++col) {
    CVec v = ext.col(static_cast<Eigen::Index>(col));
    fwht(v);
    apply_cdiag(x_avg, v);
    fwht(v);
    ext.col(static_cast<Eigen::Index>(col)) = v;
  }
  if (delta > pi) {
    const auto z_avg = interval_average_diag(n, t, delta - pi, threads);
    for (std::size_t col = 0; col < dim; ++col) {
      CVec v = ext.col(static_cast<Eigen::Index>(col));
      apply_cdiag(z_avg, v);
      ext.col(static_cast<Eigen::Index>(col)) = v;
    }
  }
  res.extended_distance = operator_norm(CMat(ext - p0));

  if (res.extended_distance > res.base_distance + 1e-9)
    throw ConvergenceError("appending a partial interval increased the design distance");
  return res;
}

double design_time(unsigned t, unsigned n, double eps) {
  if (t == 0) throw ConfigError("moment order must be positive");
  if (n == 0) throw ConfigError("qubit count must be positive");
  if (!(eps > 0.0) || eps > 1.0) throw ConfigError("accuracy must lie in (0, 1]");
  return (2.0 * t + 1.0 + 2.0 * std::log2(1.0 / eps) / n) * pi;
}

}  // namespace udesign
