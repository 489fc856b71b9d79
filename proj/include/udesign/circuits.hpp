#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "udesign/binary_matrix.hpp"
#include "udesign/linalg.hpp"
#include "udesign/report.hpp"
#include "udesign/rng.hpp"

namespace udesign {

// One diagonal gate of a circuit layer.  Continuous gates draw an
// independent uniform phase for every bit pattern on their index set;
// discrete two-qubit gates draw the factored form (two single-qubit phases
// from the 2*pi*m/a grid, one controlled phase from the 2*pi*m/b grid).
struct GateSpec {
  std::vector<unsigned> set;  // ascending positions within [1, n]
  bool discrete = false;
  unsigned a = 0, b = 0;  // grid sizes, discrete gates only
};

// A layered random diagonal circuit: one layer applies every gate in
// `gates`; the full circuit alternates diagonal layers with global Hadamard
// layers, ell alternations deep (2*ell+1 diagonal layers, 2*ell Hadamard
// layers), each diagonal layer drawn independently.
struct CircuitSpec {
  unsigned n = 0;
  std::vector<GateSpec> gates;
  unsigned ell = 1;

  // One continuous gate per set of the family.
  static CircuitSpec continuous(unsigned n, const IndexFamily& fam, unsigned ell = 1);
  // Discrete factored gates on every two-element subset of [1, n].
  static CircuitSpec discrete_pairs(unsigned n, unsigned a, unsigned b, unsigned ell = 1);

  // The index family spanned by the gate sets (deduplicated).
  IndexFamily family() const;

  void validate() const;
  json to_json() const;
  static CircuitSpec from_json(const json& j);
};

// The exact average of D^{(t,t)} (t plain and t conjugated copies) over one
// diagonal layer: a real diagonal operator on label pairs (K, K') of t x n
// binary matrices, indexed (K.code() << t*n) | K'.code().  Values are exact
// 0/1 indicators: a continuous gate keeps (K, K') iff the restricted row
// multisets agree on its set; a discrete gate keeps it iff the column-weight
// differences vanish mod a and the pair-count difference vanishes mod b.
class DiagonalMoment {
 public:
  DiagonalMoment(unsigned n, unsigned t, std::vector<double> diag);

  unsigned n() const { return n_; }
  unsigned t() const { return t_; }
  std::size_t dim() const { return diag_.size(); }
  const std::vector<double>& diag() const { return diag_; }

  double value(const BinaryMatrix& k, const BinaryMatrix& kp) const;
  double trace() const;
  bool swap_symmetric() const;  // invariant under exchanging K and K'

  // Run-length encoding of the diagonal in index order, for regression
  // diffs: (value, run length) pairs.
  std::vector<std::pair<double, std::uint64_t>> run_length_encoded() const;
  static DiagonalMoment from_run_length(
      unsigned n, unsigned t, const std::vector<std::pair<double, std::uint64_t>>& runs);

 private:
  unsigned n_ = 0, t_ = 0;
  std::vector<double> diag_;
};

// Exact layer moment of the circuit's diagonal layer; budget 2^(2tn) <= 2^26.
DiagonalMoment rdc_moment(const CircuitSpec& spec, unsigned t, unsigned threads = 0);

struct EtaTildeResult {
  double eta_tilde_exact = 0;  // spectral gap of the three-layer circuit moment
  double defect_bound = 0;     // eta + 3 t! L/2^(tn) + (L/2^(tn))^2
  double eta_ideal = 0;        // gap of the ideal two-basis construction at d = 2^n
  std::uint64_t lambda = 0;    // locality defect count of the gate family
};

// Exact ||Q_Z Q_X Q_Z - P0|| with Q_X the Hadamard conjugate of the layer
// moment, plus the assembled bound.  Dense budget 2^(2tn) <= 8192.  Throws
// if the exact value exceeds a bound that sits below one.
EtaTildeResult eta_tilde(const CircuitSpec& spec, unsigned t, unsigned threads = 0);

struct ResourceCount {
  std::uint64_t repetitions = 0;     // ell
  std::uint64_t diagonal_gates = 0;  // (2 ell + 1) n(n-1)/2 two-qubit gates
  std::uint64_t hadamard_layers = 0; // 2 ell global layers, counted separately
  unsigned bits_per_gate = 0;        // 2 ceil(log2(t+1)) + ceil(log2(floor(t/2)+1))
  double bits_per_gate_real = 0;     // 2 log2(t+1) + log2(floor(t/2)+1)
  double bits_per_gate_bound = 0;    // 3 log2(t+1)
  std::uint64_t random_bits = 0;     // integer accounting
  double random_bits_real = 0;       // real-valued accounting
  // The integer count can round above the real-valued ceiling; both are
  // reported and this flag marks the case.
  bool integer_exceeds_real_bound = false;
};

ResourceCount resource_count(unsigned n, unsigned t, double eps);

// One realization of the full alternating circuit as a dense 2^n unitary;
// deterministic given the rng state.  Budget 2^n <= 1024.
CMat sample_circuit(const CircuitSpec& spec, RandomSource& rng);

// Dense iterated moment Q_Z (Q_X Q_Z)^ell, assembled column by column with
// fast Hadamard transforms; budget 2^(2tn) <= 8192.
CMat circuit_iterated_moment_dense(const CircuitSpec& spec, unsigned t);

}  // namespace udesign
