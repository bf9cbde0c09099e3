#pragma once

// Entanglement witnesses on covariance matrices: certification through the
// symplectic trace, expectation values, p-separability bounds, minimal
// witnesses and the one-parameter Duan family.

#include "gcv/covariance.hpp"
#include "gcv/entanglement.hpp"

#include <span>
#include <string>
#include <vector>

namespace gcv {

/// Sum of the symplectic eigenvalues, zeros included. Throws
/// Errc::precondition for indefinite input.
double symplectic_trace(const Mat& a);

enum class WitnessStatus { global_witness, split_witness, not_witness };

std::string_view to_string(WitnessStatus s) noexcept;

struct WitnessCertificate {
  WitnessStatus status = WitnessStatus::not_witness;
  double min_eigenvalue = 0.0;
  double str_a = 0.0;
  double str_b = 0.0;
  double str_total = 0.0;  // str[Z]; only meaningful when Z >= 0
  std::string message;

  double str_sum() const noexcept { return str_a + str_b; }
  bool certified() const noexcept { return status != WitnessStatus::not_witness; }
};

/// global_witness iff Z >= 0 and str[Z] >= 1/2; split_witness iff Z >= 0 and
/// str[Z_A] + str[Z_B] >= 1/2. Asymmetric input throws
/// Errc::symmetry_violation.
WitnessCertificate certify_witness(const Mat& z, ModeSplit split,
                                   double tol = tol::certification);

/// A certified witness matrix for a fixed split.
class Witness {
 public:
  /// Throws Errc::certification_failed (message carries the str values).
  static Witness from_matrix(const Mat& z, ModeSplit split, double tol = tol::certification);

  const Mat& matrix() const noexcept { return z_; }
  ModeSplit split() const noexcept { return split_; }
  int modes() const noexcept { return split_.modes(); }
  const WitnessCertificate& certificate() const noexcept { return cert_; }

 private:
  Witness(Mat z, ModeSplit split, WitnessCertificate cert)
      : z_(std::move(z)), split_(split), cert_(std::move(cert)) {}

  Mat z_;
  ModeSplit split_;
  WitnessCertificate cert_;
};

struct WitnessOutcome {
  double value = 0.0;                          // m = tr[Z gamma]
  double expectation_with_displacement = 0.0;  // tr[Z gamma] + 2 d^T Z d
  double p_bound = 0.0;                        // gamma is not p-separable for p > m
  double logneg_lower_bound = 0.0;             // max(ln(1/m), 0) for 0 < m < 1

  bool detects_entanglement(double tol = tol::certification) const noexcept {
    return value < 1.0 - tol;
  }
};

/// Expectation of a witness; the state is taken in the gamma convention.
/// Throws Errc::invalid_dimension on a mode mismatch.
WitnessOutcome witness_value(const Witness& z, const GaussianState& state);
WitnessOutcome witness_value(const Witness& z, const CovarianceMatrix& gamma);

struct PSeparabilityEstimate {
  double p_min = 0.0;
  std::size_t arg_min = 0;  // index into the family
};

/// Minimum witness value over a family. Throws Errc::precondition for an
/// empty family.
PSeparabilityEstimate p_separability_level(const CovarianceMatrix& gamma, ModeSplit split,
                                           std::span<const Witness> family);

/// gamma / p is a valid CM with positive partial transpose. Exact only for
/// splits where PPT is sufficient; other splits throw Errc::precondition.
bool is_p_separable(const CovarianceMatrix& gamma, ModeSplit split, double p);

struct MinimalWitness {
  Witness witness;
  double m_min = 0.0;  // smallest symplectic eigenvalue of gamma^{T_A}
  bool rescaled = false;
  WitnessCertificate raw_certificate;  // before any rescaling
};

/// Witness attaining tr[Z gamma] = smallest PT symplectic eigenvalue, built
/// from the Williamson transform of gamma^{T_A}. Tight for two modes; for
/// larger systems it is still a valid witness but tightness is not claimed.
MinimalWitness minimal_witness(const CovarianceMatrix& gamma, ModeSplit split);
/// Same, restricted to two modes (Errc::invalid_dimension otherwise).
MinimalWitness minimal_witness_two_mode(const CovarianceMatrix& gamma, ModeSplit split = {1, 1});

/// Duan witness Z_a on a 1|1 split. Throws Errc::domain for a = 0.
Witness duan_witness(double a);

/// 401 log-spaced magnitudes in [1e-2, 1e2].
std::vector<double> duan_default_grid();

struct DuanScanResult {
  double best_value = 0.0;
  double best_a = 0.0;
  std::vector<double> values;  // tr[Z_a gamma] per signed grid point: +g0, -g0, +g1, -g1, ...
};

/// Scans both signs of every grid magnitude, then refines the best point with
/// a golden-section search in log|a|. Needs a two-mode gamma.
DuanScanResult duan_scan(const CovarianceMatrix& gamma, std::span<const double> grid);
/// Serial reference of the above; results are bit-identical.
DuanScanResult duan_scan_serial(const CovarianceMatrix& gamma, std::span<const double> grid);

}  // namespace gcv
