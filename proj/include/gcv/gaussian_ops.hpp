#pragma once

// Gaussian operations acting on covariance matrices: conditional updates after
// projecting some modes onto a Gaussian state (Schur complements), homodyne
// and coherent projections, classical noise and noisy channels.
//
// Everything here takes and returns the gamma convention. Projections onto a
// target Gamma_w written in the capital convention become projections onto
// gamma_w = sigma^T Gamma_w sigma, after which the update reads
//   gamma' = A - C (B + gamma_w)^{-1} C^T,  d' = d_A - C (B + gamma_w)^{-1} (d_B - d_w).

#include "gcv/covariance.hpp"

#include <array>
#include <span>
#include <vector>

namespace gcv {

struct ProjectionResult {
  CovarianceMatrix cm;  // remaining modes, original order
  Vec displacement;
  std::vector<int> measured_modes;
};

/// Projects `measured` modes of `state` onto the Gaussian state (target_cm,
/// target_displacement). Throws Errc::singular when B + gamma_w is singular,
/// Errc::invalid_dimension for bad mode lists.
ProjectionResult schur_project(const GaussianState& state, std::span<const int> measured,
                               const CovarianceMatrix& target_cm, const Vec& target_displacement);

/// Pointer state localized at x with width eps: capital Gamma = diag(1/eps^2,
/// eps^2), i.e. gamma = diag(eps^2, 1/eps^2). Throws Errc::domain for eps <= 0.
CovarianceMatrix homodyne_pointer_cm(double eps);

/// Homodyne (x-quadrature) measurement of one mode with pointer width eps and
/// outcome x.
ProjectionResult homodyne_project(const GaussianState& state, int mode, double eps, double x = 0.0);

/// eps -> 0 limit via the Moore-Penrose inverse of Pi B Pi, Pi projecting on x.
ProjectionResult homodyne_project_limit(const GaussianState& state, int mode, double x = 0.0);

/// Projection of one mode onto a coherent state (gamma_w = I) with the given
/// displacement.
ProjectionResult coherent_project(const GaussianState& state, int mode, const Vec& alpha_displacement);

struct CoherentPipelineResult {
  ProjectionResult pipeline;     // beam splitter + two homodyne measurements
  ProjectionResult closed_form;  // A - C (B + I)^{-1} C^T
  double max_difference = 0.0;   // between the two CMs
};

/// Coherent projection of mode 2 of a two-mode state realized optically:
/// adjoin a vacuum, 50:50 beam splitter on modes 2-3, phase shifter sigma on
/// mode 3, homodyne mode 2 and mode 3 with width eps and outcomes (x, y). The
/// closed form uses the amplitude sqrt2 (x, y) / (1 + eps^2) the outcomes imply.
CoherentPipelineResult coherent_project_via_homodyne(const GaussianState& state, double eps = 1.0,
                                                     double x = 0.0, double y = 0.0);

/// gamma + delta for positive semidefinite delta. Throws Errc::precondition
/// when delta is indefinite.
CovarianceMatrix add_classical_noise(const CovarianceMatrix& gamma, const Mat& delta);

/// gamma_s' = S_s gamma_s S_s^T + S_c gamma_e S_c^T where (S_s, S_c) are the
/// system rows of a symplectic transform on system (+) environment.
struct ChannelSpec {
  Mat system_block;    // 2Ns x 2Ns
  Mat coupling_block;  // 2Ns x 2Ne
  CovarianceMatrix environment_cm;
  SymplecticMatrix full_transform;

  /// Cuts the blocks out of a joint symplectic transform (system first).
  static ChannelSpec from_dilation(const SymplecticMatrix& full, const CovarianceMatrix& env);

  Mat noise() const;  // G = S_c gamma_e S_c^T
};

struct ChannelOutput {
  CovarianceMatrix cm;
  Mat noise;
};

ChannelOutput apply_channel(const ChannelSpec& spec, const CovarianceMatrix& gamma_s);

/// Minimal eigenvalue of G + i sigma - i S_s sigma S_s^T.
double noise_constraint_margin(const Mat& s_s, const Mat& g);
/// margin >= -tol.
bool check_noise_constraint(const Mat& s_s, const Mat& g, double tol = tol::uncertainty);

struct CollectiveDet {
  Mat transformed;        // T (gamma (+) gamma) T^T, 4 modes
  Mat central_block;      // (A + B) / 2
  double det_sum = 0.0;   // det(A + B) from three entries of the block
  double det_direct = 0.0;
  std::array<double, 3> entries{};  // m11, m12, m22
};

/// Two copies of a two-mode state through the four-mode beam splitter that
/// puts (A + B)/2 on a single mode; det(A + B) = 4 (m11 m22 - m12^2).
CollectiveDet collective_det_sum(const CovarianceMatrix& gamma);

/// The four-mode passive transform used above.
SymplecticMatrix collective_transform();

}  // namespace gcv
