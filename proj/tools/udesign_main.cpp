// Command-line surface: individual computations, sweeps, and the full
// verification suite.  Standard output carries exactly one report (JSON or
// CSV); progress lines go to standard error.  Exit codes: 0 = every check in
// scope passed, 1 = a check failed, 2 = invalid configuration, 3 = an
// enumeration or dense-operator budget was exceeded.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "udesign/circuits.hpp"
#include "udesign/fourier_pair.hpp"
#include "udesign/hamiltonian.hpp"
#include "udesign/linalg.hpp"
#include "udesign/local_perm.hpp"
#include "udesign/report.hpp"
#include "udesign/tpe.hpp"
#include "udesign/verify.hpp"

namespace {

using namespace udesign;

// Options shared by every subcommand.  The seed default is the documented
// reproducibility constant; reports are bitwise independent of --threads.
struct GlobalOpts {
  unsigned threads = 0;
  std::uint64_t seed = 20240901;
  std::string format = "json";
  std::string out;
  bool no_timing = false;
};

void add_global_options(CLI::App* cmd, GlobalOpts* g) {
  cmd->add_option("--threads", g->threads, "worker threads (0 = all hardware threads)")
      ->capture_default_str();
  cmd->add_option("--seed", g->seed, "seed for every sampling check")
      ->capture_default_str();
  cmd->add_option("--format", g->format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", g->out, "write the report to this path instead of stdout");
  cmd->add_flag("--no-timing", g->no_timing,
                "omit wall times and the timestamp so identical configs give "
                "byte-identical reports");
}

class WallTimer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Same pass convention as the verification registry: a row without a bound
// is informational and always passes; with a bound, pass means
// value <= bound + tolerance.
void add_row(Report& rep, std::string id, std::string detail, double value,
             std::optional<double> bound, double tolerance, double wall_ms) {
  CheckEntry e;
  e.id = std::move(id);
  e.detail = std::move(detail);
  e.value = value;
  e.bound = bound;
  e.tolerance = tolerance;
  e.pass = !e.bound || value <= *e.bound + tolerance;
  e.wall_ms = wall_ms;
  rep.checks.push_back(std::move(e));
}

Report make_report(const std::string& command, json parameters, const GlobalOpts& g) {
  Report rep;
  rep.command = command;
  rep.parameters = std::move(parameters);
  rep.seed = g.seed;
  rep.threads = g.threads;
  rep.fixture_hash = file_hash(fixture_path("golden.json"));
  return rep;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q;
  q.push_back('"');
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  q.push_back('"');
  return q;
}

// CSV form of a report: '#'-prefixed metadata lines, a header row, then one
// row per check.  Empty cells stand for absent bounds (informational rows)
// and for wall times suppressed by --no-timing.
std::string report_to_csv(const Report& rep, bool include_timing) {
  std::ostringstream out;
  out << "# schema_version=" << rep.schema_version << '\n';
  out << "# command=" << rep.command << '\n';
  out << "# parameters=" << rep.parameters.dump() << '\n';
  out << "# seed=" << rep.seed << '\n';
  out << "# threads=" << rep.threads << '\n';
  if (!rep.fixture_hash.empty()) out << "# fixture_hash=" << rep.fixture_hash << '\n';
  out << "# pass=" << (rep.pass() ? "true" : "false") << '\n';
  out << "id,criterion,detail,value,bound,tolerance,pass,wall_ms\n";
  for (const auto& c : rep.checks) {
    out << csv_quote(c.id) << ',';
    if (c.criterion > 0) out << c.criterion;
    out << ',' << csv_quote(c.detail) << ',' << fmt_full(c.value) << ',';
    if (c.bound) out << fmt_full(*c.bound);
    out << ',' << fmt_full(c.tolerance) << ',' << (c.pass ? "true" : "false") << ',';
    if (include_timing) out << fmt_full(c.wall_ms);
    out << '\n';
  }
  return out.str();
}

void emit_report(const Report& rep, const GlobalOpts& g) {
  const std::string text = g.format == "csv"
                               ? report_to_csv(rep, !g.no_timing)
                               : rep.to_json(!g.no_timing).dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw ConfigError("cannot open output path " + g.out);
  f << text;
}

ProgressFn stderr_progress(std::string label) {
  return [label = std::move(label)](std::uint64_t done, std::uint64_t total) {
    std::fprintf(stderr, "%s: %llu/%llu\n", label.c_str(),
                 static_cast<unsigned long long>(done),
                 static_cast<unsigned long long>(total));
  };
}

// min(t!^2 2^{(t-1)N}, 2^{2t^2+(t-1)N}): the two growth bounds obeyed by the
// locality defect count of the pairwise family.
double defect_growth_bound(unsigned t, unsigned n) {
  double fact = 1.0;
  for (unsigned i = 2; i <= t; ++i) fact *= i;
  const double b1 = fact * fact * std::pow(2.0, double(t - 1) * n);
  const double b2 = std::pow(2.0, 2.0 * t * t + double(t - 1) * n);
  return std::min(b1, b2);
}

IndexFamily family_from_name(const std::string& name, unsigned n) {
  if (name == "I2") return IndexFamily::all_subsets_of_size(n, 2);
  if (name == "full") return IndexFamily::full_width(n);
  throw ConfigError("unknown index family '" + name + "' (expected I2 or full)");
}

// ---------------------------------------------------------------------------
// eta: exact two-basis gap, swept over dimensions / qubit counts.

struct EtaArgs {
  unsigned t = 2;
  std::vector<std::size_t> dims;
  std::vector<unsigned> qubits;
};

Report run_eta(const EtaArgs& a, const GlobalOpts& g) {
  Report rep =
      make_report("eta", json{{"t", a.t}, {"d", a.dims}, {"N", a.qubits}}, g);
  for (std::size_t d : a.dims) {
    WallTimer w;
    const EtaResult r = tpe_eta(FourierTypePair::fourier(d), a.t, g.threads);
    std::string detail =
        "largest singular value of (phase-ensemble moment - twirl projector) for the "
        "mod-" +
        std::to_string(d) + " basis pair";
    detail += r.bound ? "; leading-order bound ((1+t^2)t!^2+t^2)/d"
                      : "; leading-order bound is vacuous at this size";
    add_row(rep, "eta-fourier-d" + std::to_string(d) + "-t" + std::to_string(a.t),
            detail, r.eta, r.bound, 1e-12, w.ms());
  }
  for (unsigned n : a.qubits) {
    WallTimer w;
    const EtaResult r = tpe_eta(FourierTypePair::pauli_xz(n), a.t, g.threads);
    std::string detail =
        "largest singular value of (phase-ensemble moment - twirl projector) for the "
        "X/Z conjugate pair on " +
        std::to_string(n) + " qubits";
    detail += r.bound ? "; leading-order bound ((1+t^2)t!^2+t^2)/d"
                      : "; leading-order bound is vacuous at this size";
    add_row(rep, "eta-xz-n" + std::to_string(n) + "-t" + std::to_string(a.t), detail,
            r.eta, r.bound, 1e-12, w.ms());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// eta-tilde: exact three-layer circuit gap against the assembled defect bound.

struct EtaTildeArgs {
  unsigned n = 3;
  unsigned t = 2;
  std::string family = "I2";
};

Report run_eta_tilde(const EtaTildeArgs& a, const GlobalOpts& g) {
  Report rep = make_report(
      "eta-tilde", json{{"N", a.n}, {"t", a.t}, {"family", a.family}}, g);
  const CircuitSpec spec = CircuitSpec::continuous(a.n, family_from_name(a.family, a.n), 1);
  WallTimer w;
  const EtaTildeResult r = eta_tilde(spec, a.t, g.threads);
  const std::string tag =
      "-n" + std::to_string(a.n) + "-t" + std::to_string(a.t) + "-" + a.family;
  add_row(rep, "eta-tilde-exact" + tag,
          "exact three-layer gap vs eta + 3 t! L/2^(tN) + (L/2^(tN))^2 with L the "
          "locality defect count",
          r.eta_tilde_exact, r.defect_bound, 1e-12, w.ms());
  add_row(rep, "eta-ideal" + tag, "gap of the ideal two-basis pair at d = 2^N",
          r.eta_ideal, std::nullopt, 0.0, 0.0);
  add_row(rep, "defect-count" + tag, "locality defect count of the gate family",
          double(r.lambda), std::nullopt, 0.0, 0.0);
  return rep;
}

// ---------------------------------------------------------------------------
// lambda: locality defect census, with optional growth sweep and pair-loop
// oracle cross-check.

struct LambdaArgs {
  unsigned t = 2;
  unsigned n = 2;
  std::string family = "I2";
  unsigned growth_max = 0;
  std::string oracle = "auto";
};

Report run_lambda(const LambdaArgs& a, const GlobalOpts& g) {
  json params{{"t", a.t}, {"N", a.n}, {"family", a.family}, {"oracle", a.oracle}};
  if (a.growth_max) params["growth"] = a.growth_max;
  Report rep = make_report("lambda", params, g);
  const std::string tshort = std::to_string(a.t);

  if (a.growth_max) {
    WallTimer w;
    const auto pts =
        lambda_growth(a.t, a.growth_max, g.threads, stderr_progress("defect census"));
    double prev_ms = 0.0;
    for (const auto& p : pts) {
      std::string detail = "pairwise-family defect count at width " + std::to_string(p.n);
      if (p.ratio) detail += "; ratio to previous width " + fmt_g(*p.ratio);
      const double now_ms = w.ms();
      add_row(rep, "defect-growth-t" + tshort + "-n" + std::to_string(p.n), detail,
              double(p.lambda), defect_growth_bound(a.t, p.n), 0.0, now_ms - prev_ms);
      prev_ms = now_ms;
    }
    return rep;
  }

  WallTimer w;
  const IndexFamily fam = family_from_name(a.family, a.n);
  const std::uint64_t count =
      lambda_count(a.t, a.n, fam, g.threads, stderr_progress("defect census"));
  const std::string tag = "-t" + tshort + "-n" + std::to_string(a.n) + "-" + a.family;
  add_row(rep, "defect-count" + tag,
          "ordered pairs sharing every restricted row multiset without being row "
          "permutations; bound min(t!^2 2^((t-1)N), 2^(2t^2+(t-1)N))",
          double(count), defect_growth_bound(a.t, a.n), 0.0, w.ms());

  const bool oracle_fits = a.t * a.n <= 16;
  if (a.oracle == "on" || (a.oracle == "auto" && oracle_fits)) {
    WallTimer w2;
    const std::uint64_t naive = lambda_count_naive(a.t, a.n, fam);
    const double diff = count >= naive ? double(count - naive) : double(naive - count);
    add_row(rep, "defect-oracle" + tag,
            "bucketed census equals the direct pair-loop oracle", diff, 0.0, 0.0,
            w2.ms());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// moment-compare: the two exact-equality routes between moment constructions.

struct MomentArgs {
  std::string route = "grid";
  unsigned n = 2;
  unsigned t = 2;
  unsigned ell = 1;
  unsigned a = 0;  // 0 = threshold default t+1
  unsigned b = 0;  // 0 = threshold default floor(t/2)+1
};

Report run_moment_compare(const MomentArgs& m, const GlobalOpts& g) {
  if (m.route == "grid") {
    const unsigned a = m.a ? m.a : m.t + 1;
    const unsigned b = m.b ? m.b : m.t / 2 + 1;
    Report rep = make_report(
        "moment-compare",
        json{{"route", "grid"}, {"N", m.n}, {"t", m.t}, {"a", a}, {"b", b}}, g);
    WallTimer w;
    const IndexFamily fam = IndexFamily::all_subsets_of_size(m.n, 2);
    const auto cont = rdc_moment(CircuitSpec::continuous(m.n, fam), m.t, g.threads);
    const auto disc = rdc_moment(CircuitSpec::discrete_pairs(m.n, a, b), m.t, g.threads);
    double diff = 0.0;
    for (std::size_t i = 0; i < cont.dim(); ++i)
      diff = std::max(diff, std::abs(cont.diag()[i] - disc.diag()[i]));
    add_row(rep,
            "moment-grid-diff-n" + std::to_string(m.n) + "-t" + std::to_string(m.t) +
                "-a" + std::to_string(a) + "-b" + std::to_string(b),
            "single-layer moment of continuous pairwise phases vs the factored "
            "discrete grid; exact equality expected once a >= t+1 and b >= "
            "floor(t/2)+1",
            diff, 0.0, 1e-12, w.ms());
    return rep;
  }

  if (m.route == "hamiltonian") {
    Report rep = make_report(
        "moment-compare",
        json{{"route", "hamiltonian"}, {"N", m.n}, {"t", m.t}, {"ell", m.ell}}, g);
    WallTimer w;
    const CMat hm = hamiltonian_moment(m.n, m.t, m.ell, g.threads);
    const unsigned b = m.t / 2 + 1;
    const CMat cm = circuit_iterated_moment_dense(
        CircuitSpec::discrete_pairs(m.n, 2 * b, b, m.ell), m.t);
    const double diff = (hm - cm).cwiseAbs().maxCoeff();
    add_row(rep,
            "moment-hamiltonian-diff-n" + std::to_string(m.n) + "-t" +
                std::to_string(m.t) + "-ell" + std::to_string(m.ell),
            "interval-averaged alternating evolution vs the iterated "
            "discrete-circuit moment",
            diff, 0.0, 1e-10, w.ms());
    return rep;
  }

  throw ConfigError("moment-compare: route must be grid or hamiltonian");
}

// ---------------------------------------------------------------------------
// design-time / resources: closed-form tables.

struct TableArgs {
  std::vector<unsigned> t{2};
  std::vector<unsigned> n{4};
  std::vector<double> eps{1.0};
};

Report run_design_time(const TableArgs& a, const GlobalOpts& g) {
  Report rep = make_report("design-time",
                           json{{"t", a.t}, {"N", a.n}, {"eps", a.eps}}, g);
  for (unsigned t : a.t)
    for (unsigned n : a.n)
      for (double eps : a.eps) {
        const double t0 = design_time(t, n, eps);
        add_row(rep,
                "design-time-t" + std::to_string(t) + "-n" + std::to_string(n) +
                    "-eps" + fmt_g(eps),
                "total evolution time (2t+1+(2/N)log2(1/eps))*pi = " +
                    fmt_g(t0 / std::numbers::pi) + " pi",
                t0, std::nullopt, 0.0, 0.0);
      }
  return rep;
}

Report run_resources(const TableArgs& a, const GlobalOpts& g) {
  Report rep =
      make_report("resources", json{{"t", a.t}, {"N", a.n}, {"eps", a.eps}}, g);
  for (unsigned t : a.t)
    for (unsigned n : a.n)
      for (double eps : a.eps) {
        const ResourceCount r = resource_count(n, t, eps);
        const std::string tag =
            "-t" + std::to_string(t) + "-n" + std::to_string(n) + "-eps" + fmt_g(eps);
        add_row(rep, "resources-repetitions" + tag,
                "alternation depth needed for the target accuracy",
                double(r.repetitions), std::nullopt, 0.0, 0.0);
        add_row(rep, "resources-diagonal-gates" + tag,
                "(2 ell + 1) N(N-1)/2 two-qubit diagonal gates",
                double(r.diagonal_gates), std::nullopt, 0.0, 0.0);
        add_row(rep, "resources-hadamard-layers" + tag,
                "2 ell global basis-change layers", double(r.hadamard_layers),
                std::nullopt, 0.0, 0.0);
        std::string bits_detail =
            "integer random bits per two-qubit gate; real-valued accounting " +
            fmt_g(r.bits_per_gate_real);
        if (r.integer_exceeds_real_bound)
          bits_detail += "; integer rounding exceeds the real-valued ceiling here";
        add_row(rep, "resources-bits-per-gate" + tag, bits_detail,
                double(r.bits_per_gate), std::nullopt, 0.0, 0.0);
        add_row(rep, "resources-bits-per-gate-real" + tag,
                "2 log2(t+1) + log2(floor(t/2)+1) vs the 3 log2(t+1) ceiling",
                r.bits_per_gate_real, r.bits_per_gate_bound, 1e-12, 0.0);
        add_row(rep, "resources-random-bits" + tag,
                "total integer random-bit count; real-valued accounting " +
                    fmt_g(r.random_bits_real),
                double(r.random_bits), std::nullopt, 0.0, 0.0);
      }
  return rep;
}

// ---------------------------------------------------------------------------
// verify-all: the registered verification suite.

struct VerifyArgs {
  std::string budget;  // empty = UDESIGN_BUDGET env, else "small"
};

Report run_verify_all(const VerifyArgs& a, const GlobalOpts& g) {
  std::string budget = a.budget;
  if (budget.empty()) {
    const char* env = std::getenv("UDESIGN_BUDGET");
    budget = (env && *env) ? env : "small";
  }
  if (budget != "small" && budget != "full")
    throw ConfigError("verify-all: budget must be 'small' or 'full' (got '" + budget +
                      "')");
  VerifyOptions opt;
  opt.threads = g.threads;
  opt.seed = g.seed;
  opt.small_budget = budget == "small";
  return run_verification(opt, &std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and sampled verification toolkit for two-basis phase-ensemble "
               "unitary designs"};
  app.require_subcommand(1);
  GlobalOpts g;

  EtaArgs eta_args;
  CLI::App* eta_cmd =
      app.add_subcommand("eta", "exact two-basis gap, swept over sizes");
  eta_cmd->add_option("--t", eta_args.t, "tensor-power order")->capture_default_str();
  auto* eta_d = eta_cmd->add_option("--d", eta_args.dims,
                                    "dimensions for the mod-d basis pair")
                    ->delimiter(',');
  eta_cmd->add_option("--N", eta_args.qubits, "qubit counts for the X/Z pair")
      ->delimiter(',');
  add_global_options(eta_cmd, &g);

  EtaTildeArgs et_args;
  CLI::App* et_cmd = app.add_subcommand(
      "eta-tilde", "exact three-layer circuit gap and its defect bound");
  et_cmd->add_option("--N", et_args.n, "qubit count")->capture_default_str();
  et_cmd->add_option("--t", et_args.t, "tensor-power order")->capture_default_str();
  et_cmd->add_option("--family", et_args.family, "gate index family")
      ->check(CLI::IsMember({"I2", "full"}))
      ->capture_default_str();
  add_global_options(et_cmd, &g);

  LambdaArgs la_args;
  CLI::App* la_cmd =
      app.add_subcommand("lambda", "locality defect census for an index family");
  la_cmd->add_option("--t", la_args.t, "tensor-power order")->capture_default_str();
  la_cmd->add_option("--N", la_args.n, "qubit count")->capture_default_str();
  la_cmd->add_option("--family", la_args.family, "index family")
      ->check(CLI::IsMember({"I2", "full"}))
      ->capture_default_str();
  la_cmd->add_option("--growth", la_args.growth_max,
                     "sweep the pairwise family over widths 2..this instead");
  la_cmd->add_option("--oracle", la_args.oracle,
                     "cross-check against the pair-loop oracle")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->capture_default_str();
  add_global_options(la_cmd, &g);

  MomentArgs mo_args;
  CLI::App* mo_cmd = app.add_subcommand(
      "moment-compare", "exact equality between two moment constructions");
  mo_cmd->add_option("--route", mo_args.route,
                     "grid: continuous vs discrete layer moment; hamiltonian: "
                     "interval average vs iterated circuit")
      ->check(CLI::IsMember({"grid", "hamiltonian"}))
      ->capture_default_str();
  mo_cmd->add_option("--N", mo_args.n, "qubit count")->capture_default_str();
  mo_cmd->add_option("--t", mo_args.t, "tensor-power order")->capture_default_str();
  mo_cmd->add_option("--ell", mo_args.ell, "alternation depth (hamiltonian route)")
      ->capture_default_str();
  mo_cmd->add_option("--a", mo_args.a, "single-site grid size (grid route; 0 = t+1)");
  mo_cmd->add_option("--b", mo_args.b,
                     "coupling grid size (grid route; 0 = floor(t/2)+1)");
  add_global_options(mo_cmd, &g);

  TableArgs dt_args;
  CLI::App* dt_cmd =
      app.add_subcommand("design-time", "total evolution time for target accuracy");
  dt_cmd->add_option("--t", dt_args.t, "tensor-power orders")
      ->delimiter(',')
      ->capture_default_str();
  dt_cmd->add_option("--N", dt_args.n, "qubit counts")
      ->delimiter(',')
      ->capture_default_str();
  dt_cmd->add_option("--eps", dt_args.eps, "target accuracies")
      ->delimiter(',')
      ->capture_default_str();
  add_global_options(dt_cmd, &g);

  TableArgs rc_args;
  CLI::App* rc_cmd =
      app.add_subcommand("resources", "gate, layer, and random-bit counts");
  rc_cmd->add_option("--t", rc_args.t, "tensor-power orders")
      ->delimiter(',')
      ->capture_default_str();
  rc_cmd->add_option("--N", rc_args.n, "qubit counts")
      ->delimiter(',')
      ->capture_default_str();
  rc_cmd->add_option("--eps", rc_args.eps, "target accuracies")
      ->delimiter(',')
      ->capture_default_str();
  add_global_options(rc_cmd, &g);

  VerifyArgs va_args;
  CLI::App* va_cmd =
      app.add_subcommand("verify-all", "run the full verification registry");
  va_cmd->add_option("--budget", va_args.budget,
                     "small|full (default: UDESIGN_BUDGET env, else small)");
  add_global_options(va_cmd, &g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Report rep;
    if (eta_cmd->parsed()) {
      // Sweep the headline dimensions when no sizes were requested.
      if (!eta_d->count() && eta_args.qubits.empty()) eta_args.dims = {16, 32};
      rep = run_eta(eta_args, g);
    } else if (et_cmd->parsed()) {
      rep = run_eta_tilde(et_args, g);
    } else if (la_cmd->parsed()) {
      rep = run_lambda(la_args, g);
    } else if (mo_cmd->parsed()) {
      rep = run_moment_compare(mo_args, g);
    } else if (dt_cmd->parsed()) {
      rep = run_design_time(dt_args, g);
    } else if (rc_cmd->parsed()) {
      rep = run_resources(rc_args, g);
    } else {
      rep = run_verify_all(va_args, g);
    }
    emit_report(rep, g);
    return rep.pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
