#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "udesign/linalg.hpp"
#include "udesign/report.hpp"
#include "udesign/rng.hpp"

namespace udesign {

using BigRat = boost::multiprecision::cpp_rational;

// Discrete parameter sets for couplings and fields.  All values are exact
// rationals with denominator 2*(floor(t/2)+1); the proof grids cover
// [0, 1) (fields) and the first half of it (couplings), while the symmetric
// grids are centered at zero with a configurable half-width.  The symmetric
// family supports two readings of "m in [-c, c]" (integer or half-integer
// m), which differ in cardinality; quantitative statements in this module
// bind to the proof grids only.
enum class GridReading { integer, half_integer };

class ParameterGrid {
 public:
  static ParameterGrid proof_fields(unsigned t);
  static ParameterGrid proof_couplings(unsigned t);
  static ParameterGrid symmetric(unsigned t, const BigRat& half_width, GridReading reading);

  unsigned t() const { return t_; }
  const std::vector<BigRat>& values() const { return values_; }  // sorted, duplicate-free
  std::vector<double> doubles() const;

 private:
  ParameterGrid(unsigned t, std::vector<BigRat> values);
  unsigned t_ = 0;
  std::vector<BigRat> values_;
};

// Phases, in turns (units of 2*pi) reduced to [0, 1), that one coupling J
// and two fields (B, B') induce on a two-qubit diagonal gate once the
// full-interval evolution is rewritten gate-by-gate: two single-qubit
// phases -(J+B), -(J+B') and one controlled phase 2J.
std::array<BigRat, 3> induced_gate_phases(const BigRat& j, const BigRat& b1, const BigRat& b2);

// Sorted multiset of induced phase triples over couplings x fields x fields.
std::vector<std::array<BigRat, 3>> induced_phase_multiset(const ParameterGrid& couplings,
                                                          const ParameterGrid& fields);

// Sorted multiset of the factored-discrete gate grid: all triples
// (m1/a, m2/a, m3/b) in turns.
std::vector<std::array<BigRat, 3>> discrete_gate_phase_grid(unsigned a, unsigned b);

// Piecewise-constant alternating schedule: interval m covers
// [2m*pi, (2m+1)*pi) with an all-Z Hamiltonian (couplings J~_{kk'} Z_k Z_k'
// plus fields B~_k Z_k) and [(2m+1)*pi, (2m+2)*pi) with the same form in X.
// Couplings are stored over pairs k < k' in lexicographic order; fields per
// qubit.  All values live on the declared grids.
struct IntervalParams {
  std::vector<double> couplings;
  std::vector<double> fields;
};

// Which grids a schedule's parameters are drawn from and validated against.
// Only the proof grids enter quantitative moment statements; the symmetric
// readings exist so their induced phase statistics can be inspected.
enum class ScheduleGrid { proof, symmetric_integer, symmetric_half };

struct HamiltonianSchedule {
  unsigned n = 0;
  unsigned t = 0;
  ScheduleGrid grid = ScheduleGrid::proof;
  std::vector<IntervalParams> z_intervals;
  std::vector<IntervalParams> x_intervals;  // size = z size or one less

  // Draws every coupling and field independently and uniformly from the
  // chosen grids, with ell+1 Z intervals and ell X intervals (total time
  // (2*ell+1)*pi).
  static HamiltonianSchedule random(unsigned n, unsigned t, unsigned ell, RandomSource& rng,
                                    ScheduleGrid grid = ScheduleGrid::proof);

  void validate() const;
  double total_time() const;  // end of the last stored interval

  json to_json() const;
  static HamiltonianSchedule from_json(const json& j);
};

// Time evolution over [t0, t1], built interval-by-interval from diagonal
// phase tables (Z intervals) and their Hadamard conjugates (X intervals);
// partial intervals included.  Dense budget 2^N <= 1024.
CMat evolve_window(const HamiltonianSchedule& sched, double t0, double t1);
CMat evolve(const HamiltonianSchedule& sched, double T);

// Entrywise max residual of the exact two-qubit rewriting
//   e^{i pi J Z1 Z2} (e^{i pi B1 Z1} x e^{i pi B2 Z2})
//     = e^{i pi (J+B1+B2)} (diag{1, e^{-2 pi i (J+B1)}} x
//       diag{1, e^{-2 pi i (J+B2)}}) diag{1, 1, 1, e^{4 pi i J}},
// assembled as dense 4x4 products on both sides.
double phase_decomposition_check(double j, double b1, double b2);
// Worst residual over the full proof grid (couplings x fields x fields).
double phase_decomposition_max_residual(unsigned t);

// Exact ensemble average of the evolution's t-th moment at T = (2*ell+1)*pi,
// averaged interval-by-interval over all proof-grid assignments.  Asserts
// agreement with the factored-discrete circuit route within 1e-10 before
// returning.  Dense budget 2^(2tN) <= 8192.
CMat hamiltonian_moment(unsigned n, unsigned t, unsigned ell, unsigned threads = 0);

// Distances from the balanced-average projector at the lattice time
// T = (2*ell+1)*pi and at T + delta, delta in [0, 2*pi).  Appending an
// independent partial interval cannot increase the distance; asserts
// extended <= base + 1e-9.
struct ClosureResult {
  double base_distance = 0;
  double extended_distance = 0;
};
ClosureResult post_threshold_closure(unsigned n, unsigned t, unsigned ell, double delta,
                                     unsigned threads = 0);

// Total schedule time guaranteeing a relative-error eps design:
// (2t + 1 + (2/N) log2(1/eps)) * pi.
double design_time(unsigned t, unsigned n, double eps);

}  // namespace udesign
