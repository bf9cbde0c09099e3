#pragma once

// Partial transposition at the level of covariance matrices, the PPT test and
// the logarithmic negativity. Party A is always the first n_a modes and is the
// transposed side.

#include "gcv/covariance.hpp"

#include <string>

namespace gcv {

struct ModeSplit {
  int n_a = 1;
  int n_b = 1;

  int modes() const noexcept { return n_a + n_b; }
  /// 1|(N-1).
  static ModeSplit default_for(int modes);
  /// Parses "A:B" (also "A|B"). Throws Errc::parse.
  static ModeSplit parse(const std::string& text);
  std::string to_string() const;
};

/// Throws Errc::invalid_dimension unless both parts are positive and add up
/// to `modes`.
void check_split(ModeSplit split, int modes);

/// True for splits where PPT is also sufficient for separability: one side
/// holds a single mode.
bool ppt_sufficient(ModeSplit split) noexcept;

/// (M_A (+) I) gamma (M_A (+) I) with M_A = diag(1, -1) per mode of A. In the
/// capital convention M_A is replaced by -M_A. The result is symmetric and
/// positive but need not satisfy the uncertainty relation.
Mat partial_transpose_cm(const Mat& gamma, ModeSplit split, Convention convention = Convention::gamma);
Mat partial_transpose_cm(const CovarianceMatrix& gamma, ModeSplit split);

/// Reorders the modes so that B comes first; returns the swapped split too.
std::pair<Mat, ModeSplit> swap_parties(const Mat& gamma, ModeSplit split);

/// All symplectic eigenvalues of gamma^{T_A} are >= 1 - tol.
bool is_ppt(const CovarianceMatrix& gamma, ModeSplit split, double tol = tol::uncertainty);

struct NegativityReport {
  SymplecticSpectrum pt_spectrum;  // of gamma^{T_A}
  double log_negativity = 0.0;     // natural log
  bool entangled = false;          // log_negativity > tol::entangled
  bool ppt_sufficient = false;
};

NegativityReport log_negativity(const CovarianceMatrix& gamma, ModeSplit split);

/// Two-mode log-negativity from the Simon invariants alone.
double log_negativity_closed_form(const CovarianceMatrix& gamma);

/// E_N = -sum min(ln nu_i, 0) over a given spectrum.
double log_negativity_of_spectrum(const SymplecticSpectrum& pt_spectrum);

/// Entangled => squeezed. Returns false only if gamma is entangled but has no
/// eigenvalue below one.
bool entangled_implies_squeezed_check(const CovarianceMatrix& gamma, ModeSplit split);

}  // namespace gcv
