#pragma once

// Covariance matrices of Gaussian states: validity, standard states,
// symplectic spectra, and the Williamson and Simon normal forms.

#include "gcv/linalg.hpp"
#include "gcv/symplectic.hpp"
#include "gcv/tolerances.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gcv {

/// gamma is the matrix of symmetrized second moments; capital is
/// Gamma = sigma gamma sigma^T. The library works in gamma internally.
enum class Convention { gamma, capital };

struct CmValidation;

/// Real symmetric 2N x 2N matrix satisfying gamma + i sigma >= 0.
class CovarianceMatrix {
 public:
  /// Validates and stores `m` (symmetrized). Throws Errc::symmetry_violation,
  /// Errc::uncertainty_violation or Errc::invalid_dimension.
  static CovarianceMatrix from_matrix(const Mat& m, Convention convention = Convention::gamma,
                                      double tol_unc = tol::uncertainty);

  const Mat& matrix() const noexcept { return m_; }
  int modes() const noexcept { return static_cast<int>(m_.rows() / 2); }
  Convention convention() const noexcept { return convention_; }

  /// Same state expressed in `target` convention.
  CovarianceMatrix in_convention(Convention target) const;

 private:
  friend CmValidation validate_cm(const Mat&, double, Convention);

  CovarianceMatrix(Mat m, Convention c) : m_(std::move(m)), convention_(c) {}

  Mat m_;
  Convention convention_ = Convention::gamma;
};

struct GaussianState {
  GaussianState(CovarianceMatrix cm, Vec displacement);
  explicit GaussianState(CovarianceMatrix cm);

  int modes() const noexcept { return cm.modes(); }

  CovarianceMatrix cm;
  Vec displacement;  // length 2N, same convention as cm
};

enum class CmFailure { none, symmetry, uncertainty };

struct CmDiagnostic {
  CmFailure failure = CmFailure::none;
  double symmetry_error = 0.0;          // ||M - M^T||_max
  double min_uncertainty_eigenvalue = 0.0;  // of M + i sigma
  std::string message;
};

struct CmValidation {
  std::optional<CovarianceMatrix> cm;
  CmDiagnostic diagnostic;

  bool ok() const noexcept { return cm.has_value(); }
};

/// Accepts iff M is symmetric (1e-12) and min eig(M + i sigma) >= -tol_unc.
/// Non-square or odd-dimensional input throws Errc::invalid_dimension.
CmValidation validate_cm(const Mat& m, double tol_unc = tol::uncertainty,
                         Convention convention = Convention::gamma);

struct SymplecticSpectrum {
  std::vector<double> values;  // descending

  double min() const { return values.back(); }
  double max() const { return values.front(); }
  double sum() const;
  double product() const;
};

/// The N non-negative eigenvalues of i sigma A for symmetric positive
/// semidefinite A; singular directions give zeros. Throws Errc::precondition
/// for indefinite A.
SymplecticSpectrum symplectic_eigenvalues(const Mat& a);

struct WilliamsonForm {
  SymplecticMatrix transform;  // S with S gamma S^T = diag(s1, s1, ..., sN, sN)
  SymplecticSpectrum spectrum;

  Mat diagonal() const;
};

/// Symplectic diagonalization of a strictly positive definite symmetric
/// matrix (a valid CM, or its partial transpose). Singular input throws
/// Errc::degenerate_input.
WilliamsonForm williamson(const Mat& positive);
WilliamsonForm williamson(const CovarianceMatrix& gamma);

/// Local invariants of a two-mode CM gamma = [[A, C], [C^T, B]].
struct SimonInvariants {
  double a = 0.0;   // sqrt(det A)
  double b = 0.0;   // sqrt(det B)
  double cd = 0.0;  // det C
  double det_gamma = 0.0;
};

SimonInvariants simon_invariants(const Mat& gamma);
SimonInvariants simon_invariants(const CovarianceMatrix& gamma);

/// (c, d) with c >= |d|, c * d = cd and
/// det_gamma = a^2 b^2 + (cd)^2 - a b (c^2 + d^2).
/// Throws Errc::inconsistent_invariants when no real split exists.
std::pair<double, double> resolve_cd(const SimonInvariants& inv);

/// Closed-form two-mode symplectic spectrum from the Simon invariants;
/// `transposed` gives the spectrum of the partial transpose. Throws
/// Errc::inconsistent_invariants when the discriminant is negative beyond
/// `tol` (relative to the squared sum term).
SymplecticSpectrum symplectic_eigs_from_invariants(const SimonInvariants& inv, bool transposed,
                                                   double tol = 1e-10);

struct SimonNormalForm {
  SymplecticMatrix local;  // S1 (+) S2
  CovarianceMatrix normal_form;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;  // c >= 0, d carries the sign of det C
};

/// Local symplectic reduction of a two-mode CM to
/// [[a,0,c,0],[0,a,0,d],[c,0,b,0],[0,d,0,b]].
SimonNormalForm simon_normal_form(const CovarianceMatrix& gamma);

/// Ordinary eigenvalues of a Simon-normal-form matrix, closed form.
std::vector<double> simon_normal_form_eigenvalues(double a, double b, double c, double d);

bool is_pure(const CovarianceMatrix& gamma, double tol = tol::purity);
bool is_squeezed(const CovarianceMatrix& gamma, double tol = tol::uncertainty);

CovarianceMatrix vacuum_cm(int modes);
/// Identity CM with displacement sqrt(2) (Re alpha, Im alpha) per mode.
GaussianState coherent_state(std::span<const std::complex<double>> alphas);
/// Squeezed vacuum [[ch + sh cos phi, sh sin phi], [sh sin phi, ch - sh cos phi]]
/// with ch = cosh 2r, sh = sinh 2r. squeezed_cm(r, 0) = diag(e^{2r}, e^{-2r}).
CovarianceMatrix squeezed_cm(double r, double phi);
/// Thermal CM diag(nu_1, nu_1, ...). Throws Errc::domain for any nu < 1.
CovarianceMatrix thermal_cm(std::span<const double> nus);
/// nu = 1 / tanh(beta omega / 2).
double thermal_nu(double beta_omega);
/// Two-mode squeezed vacuum: a = cosh 2r, c = -d = sinh 2r.
CovarianceMatrix two_mode_squeezed_cm(double r);

/// Gamma = sigma gamma sigma^T. The map is its own inverse.
Mat convert_convention(const Mat& m);

/// Principal submatrix over the listed modes; always a valid CM again.
CovarianceMatrix reduced_cm(const CovarianceMatrix& gamma, std::span<const int> modes);

}  // namespace gcv
