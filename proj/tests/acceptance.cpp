// Acceptance gate: runs the verification registry at full budget and scores
// the eleven-item manifest, one pass/fail line per item, enforcing each
// item's stated runtime budget.  The determinism item gets a second full run
// at a different worker count.  Exits nonzero if any item fails.
//
// One manifest expectation is knowingly unsatisfiable and is reported as an
// honest failure rather than hidden: a strictly positive locality
// defect census at t = 4 on two qubits.  With only two columns the pairwise
// index family contains just the full-width set, and agreement of full-width
// row multisets forces a row permutation, so that census is identically
// zero.  Both counting routes agree on zero, the count is strictly positive
// from three qubits on, and everything else scored under that item holds.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "udesign/binary_matrix.hpp"
#include "udesign/local_perm.hpp"
#include "udesign/report.hpp"
#include "udesign/verify.hpp"

using namespace udesign;

namespace {

struct ManifestItem {
  int id;
  double budget_s;  // 0 = no stated runtime budget
  const char* what;
};

const ManifestItem kManifest[] = {
    {1, 120,
     "Monte-Carlo Haar moment within 5e-3 of the exact projector at "
     "(d,t) = (2,1), (2,2), (3,2) over 1e5 samples"},
    {2, 600,
     "exact two-basis gap at t = 2 obeys the 24/d bound at d = 32 and "
     "decreases from d = 16 to d = 32"},
    {3, 60,
     "first-order gap vanishes to 1e-10 for both basis families up to "
     "d = 8 and N = 3"},
    {4, 300,
     "locality defect census: exact zeros through t = 3, oracle-matched "
     "counts, growth bounds, strict positivity at t = 4 for N = 2 and 3, "
     "and the column characterization of every counted pair"},
    {5, 60,
     "continuous and threshold-grid layer moments agree to 1e-12 at "
     "(N,t) = (2,2), (3,2), (2,3)"},
    {6, 300,
     "exact three-layer gap obeys the assembled defect bound at N = 3, "
     "t = 2 for the pairwise and the full-width gate family"},
    {7, 300,
     "non-permutation orthogonal extensions of Gram-equal pairs keep at "
     "most 8 of 16 hypercube vertices; permutations keep all 16"},
    {8, 60,
     "two-qubit corner-phase decomposition residual at most 1e-12 over "
     "all proof grids through t = 6"},
    {9, 600,
     "interval-averaged evolution equals the iterated discrete-circuit "
     "moment to 1e-10 and the certified distance stays at or below 1"},
    {10, 60,
     "tensor-power block-decomposition residual at most 1e-9 over 100 "
     "sampled unitaries at (d,t) = (2,2), (3,2), (2,3)"},
    {11, 0,
     "two full verification runs with the same seed and different worker "
     "counts give identical numerical results"},
};

void print_failing_row(const CheckEntry& e) {
  std::printf("    failing row %s: value %.12g", e.id.c_str(), e.value);
  if (e.bound) std::printf(", bound %.12g", *e.bound);
  std::printf(", tolerance %.3g\n", e.tolerance);
}

}  // namespace

int main() {
  std::printf("acceptance gate: verification registry at full budget, "
              "default seed, plus a second run for determinism\n\n");

  VerifyOptions opt;
  opt.small_budget = false;

  opt.threads = 1;
  std::fprintf(stderr, "-- run 1 (threads = 1)\n");
  const Report r1 = run_verification(opt, &std::cerr);

  opt.threads = 2;
  std::fprintf(stderr, "-- run 2 (threads = 2)\n");
  const Report r2 = run_verification(opt, &std::cerr);

  json j1 = r1.to_json(false);
  json j2 = r2.to_json(false);
  j1.erase("threads");
  j2.erase("threads");
  const bool runs_identical = j1.dump() == j2.dump();

  double run2_ms = 0.0;
  for (const auto& e : r2.checks) run2_ms += e.wall_ms;

  // The literal width-2 positivity expectation, evaluated as stated.
  const std::uint64_t width2_census =
      lambda_count(4, 2, IndexFamily::all_subsets_of_size(2, 2));

  int failed = 0;
  for (const ManifestItem& item : kManifest) {
    double wall_ms = 0.0;
    int rows = 0;
    std::vector<const CheckEntry*> failing;
    for (const auto& e : r1.checks) {
      if (e.criterion != item.id) continue;
      ++rows;
      wall_ms += e.wall_ms;
      if (!e.pass) failing.push_back(&e);
    }

    bool pass = rows > 0 && failing.empty();
    std::vector<std::string> notes;
    if (rows == 0) notes.push_back("no registry rows mapped to this item");

    if (item.id == 4 && width2_census == 0) {
      pass = false;
      notes.push_back("the expectation 'census > 0 at t = 4, N = 2' is "
                      "unsatisfiable: the count is exactly 0");
    }
    if (item.id == 11) {
      wall_ms += run2_ms;  // the second run exists solely for this item
      if (!runs_identical) {
        pass = false;
        notes.push_back("reports differ across worker counts");
      }
    }
    if (item.budget_s > 0 && wall_ms > item.budget_s * 1000.0) {
      pass = false;
      notes.push_back("over the stated runtime budget");
    }

    if (item.budget_s > 0)
      std::printf("criterion %2d: %s  %7.1f s / budget %.0f s  (%d rows)\n",
                  item.id, pass ? "PASS" : "FAIL", wall_ms / 1000.0,
                  item.budget_s, rows);
    else
      std::printf("criterion %2d: %s  %7.1f s  (%d rows)\n", item.id,
                  pass ? "PASS" : "FAIL", wall_ms / 1000.0, rows);
    std::printf("    %s\n", item.what);
    for (const auto& note : notes) std::printf("    %s\n", note.c_str());
    for (const auto* e : failing) print_failing_row(*e);

    if (item.id == 4 && width2_census == 0) {
      std::printf(
          "    analysis: with two columns the pairwise index family contains\n"
          "    only the full-width set, and agreement of full-width row\n"
          "    multisets forces a row permutation, so no counted pairs can\n"
          "    exist at this size; the bucketed and pair-loop routes agree on\n"
          "    zero, and the census is strictly positive from N = 3 on.  The\n"
          "    positivity expectation is kept here as stated and reported as\n"
          "    a failure rather than weakened.\n");
    }

    if (!pass) ++failed;
  }

  std::printf("\nacceptance: %d/11 criteria passed\n",
              11 - failed);
  if (failed)
    std::printf("note: the single expected failure is the width-2 positivity "
                "expectation under criterion 4; see the analysis above\n");
  return failed ? 1 : 0;
}
