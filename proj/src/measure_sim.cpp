#include "gcv/measure_sim.hpp"

#include "gcv/entanglement.hpp"
#include "gcv/error.hpp"
#include "gcv/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace gcv {

std::string_view to_string(Strategy s) noexcept {
  return s == Strategy::ten_entries ? "ten_entries" : "nine_kinds";
}

Strategy parse_strategy(const std::string& text) {
  if (text == "ten" || text == "ten_entries") return Strategy::ten_entries;
  if (text == "nine" || text == "nine_kinds") return Strategy::nine_kinds;
  throw Error(Errc::parse, "unknown strategy '" + text + "' (expected ten or nine)");
}

int kinds_of(Strategy s) noexcept { return s == Strategy::ten_entries ? 10 : 9; }

std::uint64_t MeasurementPlan::per_kind_samples() const noexcept {
  return total_samples / static_cast<std::uint64_t>(kinds_of(strategy));
}

void MeasurementPlan::validate() const {
  if (repetitions < 1) {
    throw Error(Errc::invalid_plan, "repetitions must be at least 1");
  }
  if (per_kind_samples() < 2) {
    throw Error(Errc::invalid_plan, "total budget " + std::to_string(total_samples) +
                                        " leaves fewer than two samples per measurement kind");
  }
}

namespace {

void require_two_modes(const CovarianceMatrix& truth) {
  if (truth.modes() != 2) {
    throw Error(Errc::invalid_dimension, "the estimation schemes need a two-mode CM");
  }
}

// Variance of the x quadrature after the pi/4 rotation that brings the
// off-diagonal entry (i, j) of a 2x2 block onto the diagonal.
double rotated_variance(double gii, double gjj, double gij) { return 0.5 * (gii + gjj) - gij; }

// Estimates a 2x2 block from its three measurable variances.
Mat estimate_block(const Mat& exact, const VarianceSource& source) {
  const double v1 = source(exact(0, 0));
  const double v3 = source(exact(1, 1));
  const double r = source(rotated_variance(exact(0, 0), exact(1, 1), exact(0, 1)));
  Mat out(2, 2);
  out << v1, 0.5 * (v1 + v3) - r, 0.5 * (v1 + v3) - r, v3;
  return out;
}

[[noreturn]] void step_failure(int step, const std::string& why) {
  throw Error(Errc::degenerate_input, "step " + std::to_string(step) + ": " + why);
}

BranchSpectra branch(double a, double b, double cd, double det_gamma) {
  BranchSpectra out;
  out.cd = cd;
  const SimonInvariants inv{a, b, cd, det_gamma};
  try {
    out.spectrum = symplectic_eigs_from_invariants(inv, false);
    out.pt_spectrum = symplectic_eigs_from_invariants(inv, true);
    out.ok = true;
  } catch (const Error&) {
    out.ok = false;
  }
  return out;
}

double branch_min(const BranchSpectra& b) {
  return std::min(b.spectrum.min(), b.pt_spectrum.min());
}

}  // namespace

NineStepResult nine_step_estimate(const CovarianceMatrix& truth, const VarianceSource& source) {
  require_two_modes(truth);
  const Mat g = truth.in_convention(Convention::gamma).matrix();
  NineStepResult out;

  // Steps 1-2: local blocks and their invariants.
  out.a_est = estimate_block(g.topLeftCorner<2, 2>(), source);
  out.b_est = estimate_block(g.bottomRightCorner<2, 2>(), source);
  const double det_a = out.a_est.determinant();
  const double det_b = out.b_est.determinant();
  if (!(det_a > 0.0) || !(out.a_est(0, 0) > 0.0)) step_failure(1, "estimated A is not positive definite");
  if (!(det_b > 0.0) || !(out.b_est(0, 0) > 0.0)) step_failure(2, "estimated B is not positive definite");
  out.a = std::sqrt(det_a);
  out.b = std::sqrt(det_b);

  // Step 3: local transforms bringing the estimated blocks to a I and b I.
  Mat s_a, s_b;
  try {
    s_a = williamson(out.a_est).transform.matrix();
    s_b = williamson(out.b_est).transform.matrix();
  } catch (const Error& e) {
    step_failure(3, e.what());
  }

  // Step 4: apply them to the physical state and project mode 2 onto the
  // vacuum. Outcome-dependent displacements do not affect the CM.
  const Mat gp = apply_congruence(direct_sum(s_a, s_b), g);
  const Mat c = gp.topRightCorner<2, 2>();
  const Mat bp = gp.bottomRightCorner<2, 2>() + Mat::Identity(2, 2);
  Eigen::FullPivLU<Mat> lu(bp);
  if (!lu.isInvertible()) step_failure(4, "B' + I is singular");
  const Mat conditional =
      symmetrized(gp.topLeftCorner<2, 2>() - c * lu.inverse() * c.transpose());

  // Step 5: three variances of the conditional state give |det C|.
  out.conditional = estimate_block(conditional, source);
  const double g1 = out.conditional(0, 0), g2 = out.conditional(0, 1), g3 = out.conditional(1, 1);
  const double bp1 = out.b + 1.0;
  double det_c_sq = bp1 * bp1 * ((out.a - g1) * (out.a - g3) - g2 * g2);
  if (det_c_sq < 0.0) {
    out.det_c_clipped = true;
    det_c_sq = 0.0;
  }
  out.abs_det_c = std::sqrt(det_c_sq);

  // Step 6: det gamma = det[(b + 1) gamma'' - a I].
  const Mat m = bp1 * out.conditional - out.a * Mat::Identity(2, 2);
  out.det_gamma = m.determinant();

  // Step 7: the sign of det C is not measured. The two branches swap the
  // spectra of gamma and gamma^{T_A}, so the smallest of the four values is
  // branch independent.
  out.positive = branch(out.a, out.b, out.abs_det_c, out.det_gamma);
  out.negative = branch(out.a, out.b, -out.abs_det_c, out.det_gamma);
  if (!out.positive.ok && !out.negative.ok) {
    step_failure(7, "no real symplectic spectrum for the estimated invariants");
  }
  double best = std::numeric_limits<double>::infinity();
  if (out.positive.ok) best = std::min(best, branch_min(out.positive));
  if (out.negative.ok) best = std::min(best, branch_min(out.negative));
  out.gamma1_ta = best;
  out.entangled = best < 1.0 - tol::uncertainty;
  out.sign_ambiguity_resolved =
      out.positive.ok && out.negative.ok &&
      (branch_min(out.positive) < 1.0 - tol::uncertainty) ==
          (branch_min(out.negative) < 1.0 - tol::uncertainty);
  return out;
}

NineStepResult nine_step_estimate(const CovarianceMatrix& truth) {
  return nine_step_estimate(truth, [](double v) { return v; });
}

Mat ten_entry_estimate(const CovarianceMatrix& truth, const VarianceSource& source) {
  require_two_modes(truth);
  const Mat g = truth.in_convention(Convention::gamma).matrix();
  Mat est(4, 4);
  for (int i = 0; i < 4; ++i) est(i, i) = source(g(i, i));
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double v = source(rotated_variance(g(i, i), g(j, j), g(i, j)));
      est(i, j) = est(j, i) = 0.5 * (est(i, i) + est(j, j)) - v;
    }
  }
  return est;
}

std::uint64_t stream_seed(std::uint64_t seed, Strategy strategy, std::uint64_t index) {
  // splitmix64 finalizer applied to a simple combination of the inputs.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  const std::uint64_t tag = strategy == Strategy::ten_entries ? 0x7465ULL : 0x6e69ULL;
  return mix(mix(mix(seed) ^ tag) ^ index);
}

namespace {

// Unbiased sample variance of n draws from N(0, v) (Welford).
class SampledVariance {
 public:
  SampledVariance(std::uint64_t seed, std::uint64_t n) : rng_(seed), n_(n) {}

  double operator()(double exact_variance) {
    std::normal_distribution<double> dist(0.0, std::sqrt(std::max(0.0, exact_variance)));
    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t k = 1; k <= n_; ++k) {
      const double x = dist(rng_);
      const double delta = x - mean;
      mean += delta / static_cast<double>(k);
      m2 += delta * (x - mean);
    }
    return m2 / static_cast<double>(n_ - 1);
  }

 private:
  std::mt19937_64 rng_;
  std::uint64_t n_;
};

RepetitionEstimate run_repetition(const CovarianceMatrix& truth, const MeasurementPlan& plan,
                                  std::uint64_t index) {
  SampledVariance sampler(stream_seed(plan.seed, plan.strategy, index), plan.per_kind_samples());
  const VarianceSource source = [&sampler](double v) { return sampler(v); };
  RepetitionEstimate rep;
  try {
    if (plan.strategy == Strategy::ten_entries) {
      const Mat est = ten_entry_estimate(truth, source);
      rep.valid_cm = validate_cm(est).ok();
      const double det_a = est.topLeftCorner<2, 2>().determinant();
      const double det_b = est.bottomRightCorner<2, 2>().determinant();
      if (!(det_a > 0.0) || !(det_b > 0.0)) {
        rep.failure = "estimated local block is not positive definite";
        return rep;
      }
      const SimonInvariants inv = simon_invariants(est);
      rep.a = inv.a;
      rep.b = inv.b;
      rep.abs_det_c = std::abs(inv.cd);
      rep.det_gamma = inv.det_gamma;
      rep.spectrum = symplectic_eigs_from_invariants(inv, false);
      rep.pt_spectrum = symplectic_eigs_from_invariants(inv, true);
      rep.gamma1_ta = rep.pt_spectrum.min();
    } else {
      const NineStepResult r = nine_step_estimate(truth, source);
      rep.a = r.a;
      rep.b = r.b;
      rep.abs_det_c = r.abs_det_c;
      rep.det_gamma = r.det_gamma;
      if (r.negative.ok) {
        rep.spectrum = r.negative.spectrum;
        rep.pt_spectrum = r.negative.pt_spectrum;
      }
      rep.gamma1_ta = r.gamma1_ta;
      rep.sign_ambiguity_resolved = r.sign_ambiguity_resolved;
      rep.valid_cm = true;
    }
    rep.computable = std::isfinite(rep.gamma1_ta);
    if (!rep.computable) rep.failure = "non-finite estimate";
  } catch (const Error& e) {
    rep.computable = false;
    rep.failure = e.what();
  }
  return rep;
}

StrategyReport begin_report(const CovarianceMatrix& truth, const MeasurementPlan& plan) {
  require_two_modes(truth);
  plan.validate();
  StrategyReport report;
  report.plan = plan;
  report.per_kind_samples = plan.per_kind_samples();
  const CovarianceMatrix g = truth.in_convention(Convention::gamma);
  report.exact_gamma1_ta =
      symplectic_eigenvalues(partial_transpose_cm(g.matrix(), ModeSplit{1, 1})).min();
  report.repetitions.resize(static_cast<std::size_t>(plan.repetitions));
  return report;
}

// Ordered reduction by repetition index.
void finish_report(StrategyReport& report) {
  double sum = 0.0, sq = 0.0;
  for (const RepetitionEstimate& r : report.repetitions) {
    if (!r.valid_cm) ++report.invalid_cm_count;
    if (!r.sign_ambiguity_resolved) report.sign_ambiguity_resolved = false;
    if (!r.computable) {
      ++report.failed_count;
      continue;
    }
    ++report.computable_count;
    sum += r.gamma1_ta;
    const double e = r.gamma1_ta - report.exact_gamma1_ta;
    sq += e * e;
  }
  const int m = report.computable_count;
  if (m == 0) {
    report.mean_gamma1_ta = report.deviation = std::numeric_limits<double>::quiet_NaN();
  } else {
    report.mean_gamma1_ta = sum / m;
    report.deviation = m == 1 ? std::sqrt(sq) : std::sqrt(sq / (m - 1));
  }
}

}  // namespace

StrategyReport simulate_strategy_serial(const CovarianceMatrix& truth, const MeasurementPlan& plan) {
  StrategyReport report = begin_report(truth, plan);
  for (int i = 0; i < plan.repetitions; ++i) {
    report.repetitions[static_cast<std::size_t>(i)] =
        run_repetition(truth, plan, static_cast<std::uint64_t>(i));
  }
  finish_report(report);
  return report;
}

StrategyReport simulate_strategy(const CovarianceMatrix& truth, const MeasurementPlan& plan) {
  StrategyReport report = begin_report(truth, plan);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < plan.repetitions; ++i) {
    report.repetitions[static_cast<std::size_t>(i)] =
        run_repetition(truth, plan, static_cast<std::uint64_t>(i));
  }
  finish_report(report);
  return report;
}

std::vector<ComparisonRow> compare_strategies(const CovarianceMatrix& truth,
                                              const std::vector<std::uint64_t>& budgets,
                                              int repetitions, std::uint64_t seed, bool parallel) {
  if (budgets.empty()) throw Error(Errc::invalid_plan, "no budgets given");
  std::vector<ComparisonRow> rows;
  for (std::size_t k = 0; k < budgets.size(); ++k) {
    MeasurementPlan ten{Strategy::ten_entries, budgets[k], repetitions,
                        stream_seed(seed, Strategy::ten_entries, k)};
    MeasurementPlan nine{Strategy::nine_kinds, budgets[k], repetitions,
                         stream_seed(seed, Strategy::nine_kinds, k)};
    ten.validate();
    nine.validate();
    ComparisonRow row;
    row.total_samples = budgets[k];
    row.log10_n = std::log10(static_cast<double>(budgets[k]));
    row.ten = parallel ? simulate_strategy(truth, ten) : simulate_strategy_serial(truth, ten);
    row.nine = parallel ? simulate_strategy(truth, nine) : simulate_strategy_serial(truth, nine);
    row.delta_ten = row.ten.deviation;
    row.delta_nine = row.nine.deviation;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "log10_n,delta_ten,delta_nine\n";
  char buf[128];
  for (const ComparisonRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g\n", r.log10_n, r.delta_ten, r.delta_nine);
    out += buf;
  }
  return out;
}

}  // namespace gcv
