#pragma once

// Estimating the smallest partially transposed symplectic eigenvalue of a
// two-mode state from quadrature variances, either by measuring all ten
// entries of the CM or by the nine-kind scheme (local Williamson transforms,
// coherent projection of mode 2, then three variances of the conditional
// state), plus a seeded Monte-Carlo comparison of both strategies.

#include "gcv/covariance.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gcv {

enum class Strategy { ten_entries, nine_kinds };

std::string_view to_string(Strategy s) noexcept;
/// "ten" / "ten_entries" / "nine" / "nine_kinds". Throws Errc::parse.
Strategy parse_strategy(const std::string& text);

/// Number of distinct measurement kinds of a strategy (10 or 9).
int kinds_of(Strategy s) noexcept;

struct MeasurementPlan {
  Strategy strategy = Strategy::ten_entries;
  std::uint64_t total_samples = 0;
  int repetitions = 1;
  std::uint64_t seed = 0;

  /// floor(total_samples / kinds).
  std::uint64_t per_kind_samples() const noexcept;
  /// Throws Errc::invalid_plan unless every kind gets at least two samples
  /// and repetitions >= 1.
  void validate() const;
};

/// Returns an estimate of a quadrature variance whose exact value is given.
/// The exact path returns its argument; the sampled path draws Gaussian
/// samples and returns their unbiased sample variance.
using VarianceSource = std::function<double(double exact_variance)>;

struct BranchSpectra {
  double cd = 0.0;
  bool ok = false;  // false when the closed form has no real solution
  SymplecticSpectrum spectrum;
  SymplecticSpectrum pt_spectrum;
};

struct NineStepResult {
  Mat a_est;       // 2x2, step 1
  Mat b_est;       // 2x2, step 2
  Mat conditional; // estimated gamma'' after the local transforms and projection
  double a = 0.0, b = 0.0;
  double abs_det_c = 0.0;
  double det_gamma = 0.0;
  bool det_c_clipped = false;  // (det C)^2 estimate came out negative
  BranchSpectra positive;      // cd = +|det C|
  BranchSpectra negative;      // cd = -|det C|
  double gamma1_ta = 0.0;      // smallest value over both branches and both spectra
  bool entangled = false;
  bool sign_ambiguity_resolved = false;  // both branches give the same verdict
};

/// Runs the nine-kind scheme on `truth`, asking `source` for each variance.
/// Throws Errc::degenerate_input naming the failing step.
NineStepResult nine_step_estimate(const CovarianceMatrix& truth, const VarianceSource& source);
/// Exact path: every variance is known exactly.
NineStepResult nine_step_estimate(const CovarianceMatrix& truth);

/// Ten-entry estimate of the whole CM: diagonal entries from variances,
/// off-diagonal (i, j) from the variance of (R_i - R_j)/sqrt2.
Mat ten_entry_estimate(const CovarianceMatrix& truth, const VarianceSource& source);

struct RepetitionEstimate {
  bool computable = false;  // gamma1_ta could be evaluated
  bool valid_cm = false;    // ten entries: estimated CM passed validate_cm
  double a = 0.0, b = 0.0, abs_det_c = 0.0, det_gamma = 0.0;
  SymplecticSpectrum spectrum;     // ten entries: of the estimate; nine kinds: branch cd < 0
  SymplecticSpectrum pt_spectrum;
  double gamma1_ta = 0.0;
  bool sign_ambiguity_resolved = true;
  std::string failure;  // why it is not computable
};

struct StrategyReport {
  MeasurementPlan plan;
  std::uint64_t per_kind_samples = 0;
  double exact_gamma1_ta = 0.0;
  std::vector<RepetitionEstimate> repetitions;
  int computable_count = 0;
  int invalid_cm_count = 0;    // ten entries only
  int failed_count = 0;        // not computable, excluded from the deviation
  double mean_gamma1_ta = 0.0; // over computable repetitions
  /// sqrt(sum (est - exact)^2 / (M' - 1)) over the M' computable repetitions;
  /// the absolute error when M' = 1; NaN when M' = 0.
  double deviation = 0.0;
  bool sign_ambiguity_resolved = true;
};

/// Per-repetition stream seed: splitmix64 over (seed, strategy, repetition).
std::uint64_t stream_seed(std::uint64_t seed, Strategy strategy, std::uint64_t index);

/// Monte-Carlo run; repetitions execute in parallel and the report is
/// bit-identical to simulate_strategy_serial.
StrategyReport simulate_strategy(const CovarianceMatrix& truth, const MeasurementPlan& plan);
StrategyReport simulate_strategy_serial(const CovarianceMatrix& truth, const MeasurementPlan& plan);

struct ComparisonRow {
  std::uint64_t total_samples = 0;
  double log10_n = 0.0;
  double delta_ten = 0.0;
  double delta_nine = 0.0;
  StrategyReport ten;
  StrategyReport nine;
};

/// One row per budget; budget k uses seed stream_seed(seed, ., k) for both
/// strategies. Throws Errc::invalid_plan for an empty budget list.
std::vector<ComparisonRow> compare_strategies(const CovarianceMatrix& truth,
                                              const std::vector<std::uint64_t>& budgets,
                                              int repetitions, std::uint64_t seed,
                                              bool parallel = true);

/// Header `log10_n,delta_ten,delta_nine`, 6 significant digits.
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

}  // namespace gcv
