// gcv: command-line front end for the Gaussian covariance-matrix library.
//
// stdout carries JSON (or CSV for simulate); diagnostics go to stderr.
// Exit codes: 0 ok, 1 other failure, 2 parse error, 3 invalid CM,
// 4 dimension/split mismatch, 5 uncertified witness, 6 singular projection,
// 7 invalid simulation plan.

#include "gcv/covariance.hpp"
#include "gcv/entanglement.hpp"
#include "gcv/error.hpp"
#include "gcv/gaussian_ops.hpp"
#include "gcv/matrix_io.hpp"
#include "gcv/measure_sim.hpp"
#include "gcv/witnesses.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
using namespace gcv;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::uint64_t kDefaultSeed = 20240601ULL;

int exit_code(Errc code) {
  switch (code) {
    case Errc::parse: return 2;
    case Errc::symmetry_violation:
    case Errc::uncertainty_violation: return 3;
    case Errc::invalid_dimension: return 4;
    case Errc::certification_failed: return 5;
    case Errc::singular: return 6;
    case Errc::invalid_plan: return 7;
    default: return 1;
  }
}

struct Globals {
  std::string input;
  std::string split;
  std::string convention;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
};

struct Loaded {
  MatrixFile file;
  std::string raw;
  std::string hash;
};

Loaded load(const Globals& g) {
  if (g.input.empty()) throw Error(Errc::parse, "--input is required");
  Loaded l;
  l.raw = read_text(g.input);
  l.file = parse_matrix_text(l.raw, detect_format(g.input, l.raw));
  if (!g.convention.empty()) l.file.convention = parse_convention(g.convention);
  if (!g.split.empty()) l.file.split = ModeSplit::parse(g.split);
  l.hash = fnv1a_hex(l.raw);
  return l;
}

std::uint64_t resolve_seed(const Globals& g) {
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("GCV_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(Errc::parse, std::string("GCV_SEED is not an unsigned integer: ") + env);
  }
  return kDefaultSeed;
}

json provenance(const Globals& g, const Loaded* l, std::optional<std::uint64_t> seed) {
  json p;
  p["tool"] = "gcv";
  p["tool_version"] = kVersion;
  if (l) {
    p["input"] = g.input;
    p["input_hash"] = "fnv1a64:" + l->hash;
  }
  p["seed"] = seed ? json(*seed) : json(nullptr);
  return p;
}

json spectrum_json(const SymplecticSpectrum& s) {
  json a = json::array();
  for (double v : s.values) a.push_back(v);
  return a;
}

// Validated CM; failures are reported on stderr and rethrown.
CovarianceMatrix require_cm(const MatrixFile& f) {
  modes_of(f.matrix);
  const CmValidation v = validate_cm(f.matrix, tol::uncertainty, f.convention);
  if (!v.ok()) {
    throw Error(v.diagnostic.failure == CmFailure::symmetry ? Errc::symmetry_violation
                                                            : Errc::uncertainty_violation,
                "invalid covariance matrix: " + v.diagnostic.message);
  }
  return *v.cm;
}

GaussianState require_state(const MatrixFile& f) {
  CovarianceMatrix cm = require_cm(f);
  if (f.displacement) return GaussianState(cm, *f.displacement);
  return GaussianState(cm);
}

ModeSplit split_for(const MatrixFile& f, int modes) {
  const ModeSplit s = f.split ? *f.split : ModeSplit::default_for(modes);
  check_split(s, modes);
  return s;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------- analyze

int cmd_analyze(const Globals& g) {
  const Loaded l = load(g);
  const Mat& m = l.file.matrix;
  const int n = modes_of(m);

  json r;
  r["provenance"] = provenance(g, &l, std::nullopt);
  r["modes"] = n;
  r["convention"] = std::string(to_string(l.file.convention));
  r["matrix"] = matrix_to_json(m);

  const CmValidation v = validate_cm(m, tol::uncertainty, l.file.convention);
  r["validity"] = {{"valid", v.ok()},
                   {"symmetry_error", v.diagnostic.symmetry_error},
                   {"symmetry_tolerance", tol::symmetry},
                   {"min_uncertainty_eigenvalue", v.diagnostic.min_uncertainty_eigenvalue},
                   {"uncertainty_tolerance", tol::uncertainty}};
  if (!v.ok()) {
    emit(r);
    std::cerr << "gcv: invalid covariance matrix: " << v.diagnostic.message << '\n';
    return 3;
  }
  const CovarianceMatrix cm = *v.cm;
  std::optional<ModeSplit> split;
  if (n >= 2) split = split_for(l.file, n);

  const SymplecticSpectrum spec = symplectic_eigenvalues(cm.matrix());
  r["symplectic_spectrum"] = {{"values", spectrum_json(spec)}, {"tolerance", tol::uncertainty}};
  r["purity"] = {{"pure", is_pure(cm)},
                 {"determinant", cm.matrix().determinant()},
                 {"tolerance", tol::purity}};
  r["squeezing"] = {{"squeezed", is_squeezed(cm)},
                    {"min_eigenvalue", min_eigenvalue(cm.matrix())},
                    {"tolerance", tol::uncertainty}};
  if (n == 2) {
    const SimonInvariants inv = simon_invariants(cm.in_convention(Convention::gamma));
    r["simon_invariants"] = {{"a", inv.a}, {"b", inv.b}, {"cd", inv.cd}, {"det_gamma", inv.det_gamma}};
  } else {
    r["simon_invariants"] = nullptr;
  }

  if (split) {
    r["split"] = split->to_string();
    const NegativityReport neg = log_negativity(cm, *split);
    r["entanglement"] = {{"pt_spectrum", spectrum_json(neg.pt_spectrum)},
                         {"ppt", is_ppt(cm, *split)},
                         {"log_negativity", neg.log_negativity},
                         {"entangled", neg.entangled},
                         {"ppt_sufficient", neg.ppt_sufficient},
                         {"tolerance", tol::entangled}};
    const MinimalWitness mw = minimal_witness(cm, *split);
    const WitnessOutcome o = witness_value(mw.witness, cm);
    r["witness"] = {{"source", "minimal"},
                    {"status", std::string(to_string(mw.witness.certificate().status))},
                    {"m", o.value},
                    {"p_bound", o.p_bound},
                    {"logneg_lower_bound", o.logneg_lower_bound},
                    {"tight", n == 2},
                    {"tolerance", tol::certification}};
  } else {
    r["split"] = nullptr;
    r["entanglement"] = nullptr;
    r["witness"] = nullptr;
  }
  emit(r);
  return 0;
}

// ---------------------------------------------------------------- witness

json certificate_json(const WitnessCertificate& c) {
  return {{"status", std::string(to_string(c.status))},
          {"min_eigenvalue", c.min_eigenvalue},
          {"str_a", c.str_a},
          {"str_b", c.str_b},
          {"str_sum", c.str_sum()},
          {"str_total", c.str_total},
          {"tolerance", tol::certification}};
}

json outcome_json(const WitnessOutcome& o) {
  return {{"m", o.value},
          {"expectation_with_displacement", o.expectation_with_displacement},
          {"p_bound", o.p_bound},
          {"logneg_lower_bound", o.logneg_lower_bound},
          {"detects_entanglement", o.detects_entanglement()}};
}

int cmd_witness(const Globals& g, const std::string& duan, bool minimal, const std::string& file) {
  const int chosen = (duan.empty() ? 0 : 1) + (minimal ? 1 : 0) + (file.empty() ? 0 : 1);
  if (chosen != 1) throw Error(Errc::parse, "choose exactly one of --duan, --minimal, --file");
  const Loaded l = load(g);
  const GaussianState state = require_state(l.file);
  const ModeSplit split = split_for(l.file, state.modes());

  json r;
  r["provenance"] = provenance(g, &l, std::nullopt);
  r["split"] = split.to_string();

  auto finish = [&](const Witness& w) {
    r["certification"] = certificate_json(w.certificate());
    r["witness_matrix"] = matrix_to_json(w.matrix());
    r.update(outcome_json(witness_value(w, state)));
  };

  if (minimal) {
    const MinimalWitness mw = minimal_witness(state.cm, split);
    r["source"] = "minimal";
    r["m_min"] = mw.m_min;
    r["rescaled"] = mw.rescaled;
    r["tight"] = state.modes() == 2;
    finish(mw.witness);
  } else if (!file.empty()) {
    const std::string raw = read_text(file);
    const MatrixFile wf = parse_matrix_text(raw, detect_format(file, raw));
    modes_of(wf.matrix);
    if (wf.matrix.rows() != state.cm.matrix().rows()) {
      throw Error(Errc::invalid_dimension, "witness and state dimensions differ");
    }
    const WitnessCertificate cert = certify_witness(wf.matrix, split);
    r["source"] = "file";
    r["witness_file"] = file;
    if (!cert.certified()) {
      r["certification"] = certificate_json(cert);
      emit(r);
      std::cerr << "gcv: not an entanglement witness: " << cert.message << '\n';
      return 5;
    }
    finish(Witness::from_matrix(wf.matrix, split));
  } else {
    std::string spec = duan;
    if (spec.rfind("duan:", 0) == 0) spec = spec.substr(5);
    if (spec.rfind("a=", 0) == 0) spec = spec.substr(2);
    if (split.n_a != 1 || split.n_b != 1) {
      throw Error(Errc::invalid_dimension, "the Duan family needs a two-mode state with split 1:1");
    }
    if (spec == "scan") {
      const std::vector<double> grid = duan_default_grid();
      const DuanScanResult s = duan_scan(state.cm, grid);
      r["source"] = "duan-scan";
      r["grid"] = {{"points", grid.size()}, {"min_abs_a", grid.front()}, {"max_abs_a", grid.back()},
                   {"signs", "both"}, {"refinement", "golden-section"}};
      r["a"] = s.best_a;
      finish(duan_witness(s.best_a));
    } else {
      double a = 0.0;
      try {
        std::size_t used = 0;
        a = std::stod(spec, &used);
        if (used != spec.size()) throw std::invalid_argument(spec);
      } catch (const std::exception&) {
        throw Error(Errc::parse, "--duan expects a=NUMBER or scan, got '" + duan + "'");
      }
      r["source"] = "duan";
      r["a"] = a;
      finish(duan_witness(a));
    }
  }
  emit(r);
  return 0;
}

// ---------------------------------------------------------------- project

int cmd_project(const Globals& g, const std::string& kind, double outcome_x, double outcome_y) {
  const Loaded l = load(g);
  const GaussianState state = require_state(l.file);
  const int n = state.modes();
  const ModeSplit split = split_for(l.file, n);
  const std::vector<int> measured = mode_range(split.n_a, split.n_b);

  auto single_mode = [&]() {
    if (split.n_b != 1) {
      throw Error(Errc::invalid_dimension, "homodyne projection acts on a single mode of party B");
    }
    return split.n_a;
  };

  ProjectionResult res = [&]() -> ProjectionResult {
    if (kind == "coherent") {
      Vec dw = Vec::Zero(2 * split.n_b);
      dw(0) = outcome_x;
      dw(1) = outcome_y;
      return schur_project(state, measured, vacuum_cm(split.n_b), dw);
    }
    if (kind.rfind("homodyne:", 0) == 0) {
      double eps = 0.0;
      try {
        eps = std::stod(kind.substr(9));
      } catch (const std::exception&) {
        throw Error(Errc::parse, "homodyne width must be a number: '" + kind + "'");
      }
      return homodyne_project(state, single_mode(), eps, outcome_x);
    }
    if (kind == "homodyne-limit") return homodyne_project_limit(state, single_mode(), outcome_x);
    if (kind.rfind("schur:", 0) == 0) {
      const std::string path = kind.substr(6);
      const std::string raw = read_text(path);
      const MatrixFile tf = parse_matrix_text(raw, detect_format(path, raw));
      const CovarianceMatrix target = require_cm(tf);
      const Vec dw = tf.displacement ? *tf.displacement : Vec::Zero(target.matrix().rows());
      return schur_project(state, measured, target, dw);
    }
    throw Error(Errc::parse, "unknown projection kind '" + kind + "'");
  }();

  MatrixFile out;
  out.matrix = res.cm.matrix();
  out.displacement = res.displacement;
  out.convention = Convention::gamma;
  json r = matrix_file_to_json(out);
  r["measured_modes"] = res.measured_modes;
  r["kind"] = kind;
  r["provenance"] = provenance(g, &l, std::nullopt);
  emit(r);
  return 0;
}

// ---------------------------------------------------------------- simulate

std::vector<std::uint64_t> parse_budgets(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);  // accepts 1e4
      if (used != item.size() || !(v >= 1.0) || v != std::floor(v) || v > 1e15) {
        throw std::invalid_argument(item);
      }
      out.push_back(static_cast<std::uint64_t>(v));
    } catch (const std::exception&) {
      throw Error(Errc::invalid_plan, "budget '" + item + "' is not a positive integer");
    }
  }
  if (out.empty()) throw Error(Errc::invalid_plan, "no budgets given");
  return out;
}

json strategy_json(const StrategyReport& s) {
  return {{"strategy", std::string(to_string(s.plan.strategy))},
          {"total_samples", s.plan.total_samples},
          {"per_kind_samples", s.per_kind_samples},
          {"repetitions", s.plan.repetitions},
          {"exact_gamma1_ta", s.exact_gamma1_ta},
          {"mean_gamma1_ta", s.mean_gamma1_ta},
          {"deviation", s.deviation},
          {"computable", s.computable_count},
          {"failed", s.failed_count},
          {"invalid_cm", s.invalid_cm_count},
          {"sign_ambiguity_resolved", s.sign_ambiguity_resolved}};
}

int cmd_simulate(const Globals& g, const std::string& budgets_text, int reps,
                 const std::string& strategy, const std::string& csv_out) {
  std::optional<Loaded> l;
  CovarianceMatrix truth = [&] {
    if (g.input.empty()) {
      Mat ref(4, 4);
      ref << 3.5, 0, 2.5, 0, 0, 3, 0, -2.5, 2.5, 0, 3.5, 0, 0, -2.5, 0, 3;
      return CovarianceMatrix::from_matrix(ref);
    }
    l = load(g);
    return require_cm(l->file);
  }();
  if (truth.modes() != 2) throw Error(Errc::invalid_dimension, "simulation needs a two-mode truth");
  const std::vector<std::uint64_t> budgets = parse_budgets(budgets_text);
  const std::uint64_t seed = resolve_seed(g);
  bool want_ten = true, want_nine = true;
  if (strategy != "both") {
    want_ten = parse_strategy(strategy) == Strategy::ten_entries;
    want_nine = !want_ten;
  }

  std::vector<ComparisonRow> rows;
  for (std::size_t k = 0; k < budgets.size(); ++k) {
    ComparisonRow row;
    row.total_samples = budgets[k];
    row.log10_n = std::log10(static_cast<double>(budgets[k]));
    row.delta_ten = row.delta_nine = std::nan("");
    // Same per-budget seeds as compare_strategies.
    if (want_ten) {
      row.ten = simulate_strategy(truth, {Strategy::ten_entries, budgets[k], reps,
                                          stream_seed(seed, Strategy::ten_entries, k)});
      row.delta_ten = row.ten.deviation;
    }
    if (want_nine) {
      row.nine = simulate_strategy(truth, {Strategy::nine_kinds, budgets[k], reps,
                                           stream_seed(seed, Strategy::nine_kinds, k)});
      row.delta_nine = row.nine.deviation;
    }
    rows.push_back(std::move(row));
  }
  const std::string csv = comparison_csv(rows);

  if (!csv_out.empty()) {
    std::ofstream out(csv_out, std::ios::binary);
    if (!out) throw Error(Errc::parse, "cannot write '" + csv_out + "'");
    out << csv;
  }
  if (g.format == "csv") {
    std::cout << csv;
    return 0;
  }
  json r;
  r["provenance"] = provenance(g, l ? &*l : nullptr, seed);
  r["truth"] = matrix_to_json(truth.in_convention(Convention::gamma).matrix());
  r["repetitions"] = reps;
  r["strategy"] = strategy;
  r["csv"] = csv;
  json table = json::array();
  for (const ComparisonRow& row : rows) {
    json e = {{"total_samples", row.total_samples}, {"log10_n", row.log10_n}};
    if (want_ten) e["ten_entries"] = strategy_json(row.ten);
    if (want_nine) e["nine_kinds"] = strategy_json(row.nine);
    table.push_back(std::move(e));
  }
  r["budgets"] = std::move(table);
  r["deviation_definition"] =
      "sqrt(sum (est - exact)^2 / (M' - 1)) over the M' computable repetitions; absolute error when M' = 1";
  emit(r);
  return 0;
}

// ---------------------------------------------------------------- fixture

int cmd_fixture(const std::string& name, double a, double b, int modes, double nu, double r, double phi) {
  MatrixFile f;
  Mat m;
  if (name == "reference") {
    m.resize(4, 4);
    m << 3.5, 0, 2.5, 0, 0, 3, 0, -2.5, 2.5, 0, 3.5, 0, 0, -2.5, 0, 3;
    f.split = ModeSplit{1, 1};
  } else if (name == "single") {
    m.resize(2, 2);
    m << 3, 1, 1, 1;
  } else if (name == "pair") {
    m.resize(4, 4);
    m << a, 0, b, 0, 0, a, 0, -b, b, 0, a, 0, 0, -b, 0, a;
    f.split = ModeSplit{1, 1};
  } else if (name == "vacuum") {
    m = vacuum_cm(modes).matrix();
  } else if (name == "thermal") {
    std::vector<double> nus(static_cast<std::size_t>(modes), nu);
    m = thermal_cm(nus).matrix();
  } else if (name == "squeezed") {
    m = squeezed_cm(r, phi).matrix();
  } else if (name == "tms") {
    m = two_mode_squeezed_cm(r).matrix();
    f.split = ModeSplit{1, 1};
  } else {
    throw Error(Errc::parse, "unknown fixture '" + name + "'");
  }
  // Fixtures are always valid CMs; pair only for a >= 1 + |b|.
  require_cm(MatrixFile{MatrixFormat::json, m, std::nullopt, std::nullopt, Convention::gamma});
  f.matrix = m;
  emit(matrix_file_to_json(f));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian covariance-matrix analysis: validity, spectra, entanglement, witnesses, "
               "projections and measurement simulations"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::uint64_t seed_value = 0;
  app.add_option("--input", g.input, "Matrix file (JSON or CSV), '-' for stdin");
  app.add_option("--split", g.split, "Bipartition A:B (default 1:N-1)");
  app.add_option("--convention", g.convention, "Override the file's convention")
      ->check(CLI::IsMember({"gamma", "capital"}));
  auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed (default from GCV_SEED)");
  app.add_option("--format", g.format, "Output format for simulate")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* analyze = app.add_subcommand("analyze", "Validity, spectra, invariants and entanglement report");

  auto* witness = app.add_subcommand("witness", "Evaluate an entanglement witness");
  std::string duan, witness_file;
  bool minimal = false;
  witness->add_option("--duan", duan, "a=NUMBER or scan");
  witness->add_flag("--minimal", minimal, "Minimal witness from the partial transpose");
  witness->add_option("--file", witness_file, "Witness matrix file");

  auto* project = app.add_subcommand("project", "Project party B onto a Gaussian state");
  std::string kind = "coherent";
  double outcome_x = 0.0, outcome_y = 0.0;
  project->add_option("--kind", kind, "coherent | homodyne:EPS | homodyne-limit | schur:FILE");
  project->add_option("--x", outcome_x, "Measurement outcome x (displacement only)");
  project->add_option("--y", outcome_y, "Measurement outcome y (coherent only)");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo comparison of the ten- and nine-kind strategies");
  std::string budgets = "100,1000,10000,100000";
  int reps = 200;
  std::string strategy = "both";
  std::string csv_out;
  simulate->add_option("--budgets", budgets, "Comma-separated total sample budgets");
  simulate->add_option("--reps", reps, "Repetitions per budget");
  simulate->add_option("--strategy", strategy, "both | ten | nine")
      ->check(CLI::IsMember({"both", "ten", "nine", "ten_entries", "nine_kinds"}));
  simulate->add_option("--csv-out", csv_out, "Also write the CSV table to this path");

  auto* fixture = app.add_subcommand("fixture", "Print a built-in covariance matrix as JSON");
  std::string fixture_name;
  double fa = 2.0, fb = 1.5, fnu = 2.0, fr = 0.5, fphi = 0.0;
  int fmodes = 2;
  fixture->add_option("name", fixture_name, "reference | single | pair | vacuum | thermal | squeezed | tms")
      ->required();
  fixture->add_option("--a", fa, "pair: diagonal entry");
  fixture->add_option("--b", fb, "pair: coupling");
  fixture->add_option("--modes", fmodes, "vacuum/thermal: number of modes");
  fixture->add_option("--nu", fnu, "thermal: symplectic eigenvalue");
  fixture->add_option("--r", fr, "squeezed/tms: squeezing parameter");
  fixture->add_option("--phi", fphi, "squeezed: angle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (seed_opt->count() > 0) g.seed = seed_value;

  try {
    if (analyze->parsed()) return cmd_analyze(g);
    if (witness->parsed()) return cmd_witness(g, duan, minimal, witness_file);
    if (project->parsed()) return cmd_project(g, kind, outcome_x, outcome_y);
    if (simulate->parsed()) return cmd_simulate(g, budgets, reps, strategy, csv_out);
    if (fixture->parsed()) return cmd_fixture(fixture_name, fa, fb, fmodes, fnu, fr, fphi);
  } catch (const Error& e) {
    std::cerr << "gcv: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "gcv: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
