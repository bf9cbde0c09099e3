#pragma once

// Symplectic form, the real symplectic group Sp(2N) and the standard optical
// transformations acting on it.

#include "gcv/linalg.hpp"
#include "gcv/tolerances.hpp"

#include <vector>

namespace gcv {

struct SymplecticForm {
  int modes = 0;
  Mat matrix;  // direct sum of [[0, 1], [-1, 0]] over modes
};

/// Throws Errc::invalid_dimension for modes < 1.
SymplecticForm build_sigma(int modes);

/// Shorthand for build_sigma(modes).matrix.
Mat sigma(int modes);

/// True iff ||M sigma M^T - sigma||_max <= tol. Throws for odd dimension.
bool is_symplectic(const Mat& m, double tol = tol::symplectic);

/// A real 2N x 2N matrix verified to preserve sigma.
class SymplecticMatrix {
 public:
  /// Throws Errc::precondition when `m` is not symplectic within `tol` or its
  /// determinant is not +1 within `tol` (relative).
  explicit SymplecticMatrix(Mat m, double tol = tol::symplectic);

  static SymplecticMatrix identity(int modes);

  const Mat& matrix() const noexcept { return m_; }
  int modes() const noexcept { return static_cast<int>(m_.rows() / 2); }

  /// S^{-1} = sigma^T S^T sigma, exact for symplectic S.
  SymplecticMatrix inverse() const;
  SymplecticMatrix transpose() const;

  friend SymplecticMatrix operator*(const SymplecticMatrix& a,
                                    const SymplecticMatrix& b);

 private:
  struct Trusted {};
  SymplecticMatrix(Mat m, Trusted) : m_(std::move(m)) {}

  Mat m_;
};

/// Passive (orthogonal) symplectic transformations form K(N).
bool is_passive(const SymplecticMatrix& s, double tol = tol::symplectic);

/// Two-mode 50:50 beam splitter (1/sqrt 2) [[I, -I], [I, I]].
SymplecticMatrix beam_splitter_5050();
/// Two-mode beam splitter [[cos t I, -sin t I], [sin t I, cos t I]].
SymplecticMatrix beam_splitter(double angle);
/// Single-mode rotation [[cos, sin], [-sin, cos]]; phase_shifter(pi/2) = sigma.
SymplecticMatrix phase_shifter(double angle);
/// Single-mode squeezer diag(d, 1/d). Throws Errc::domain for d <= 0.
SymplecticMatrix squeezer(double d);

/// Places a transformation on modes [first_mode, first_mode + s.modes()) of
/// an N-mode system, identity elsewhere.
SymplecticMatrix embed(const SymplecticMatrix& s, int first_mode, int total_modes);
SymplecticMatrix direct_sum(const SymplecticMatrix& a, const SymplecticMatrix& b);

enum class DecompositionKind { polar, euler };

struct Decomposition {
  DecompositionKind kind = DecompositionKind::polar;
  /// polar: (P, U) with S = P U. euler: (U1, D, U2) with S = U1 D U2.
  std::vector<SymplecticMatrix> factors;
  /// euler only: d_1 >= d_2 >= ... >= 1, D = diag(d_1, 1/d_1, d_2, 1/d_2, ...).
  std::vector<double> squeezing_values;

  Mat product() const;
};

/// S = P U with P = sqrt(S S^T) in Pi(N) and U = P^{-1} S in K(N).
Decomposition polar_decompose(const SymplecticMatrix& s);
/// S = U1 D U2 with U1, U2 passive and D diagonal squeezing.
Decomposition euler_decompose(const SymplecticMatrix& s);

/// Returns S gamma S^T, symmetrized. Throws Errc::invalid_dimension when the
/// shapes do not conform.
Mat apply_congruence(const Mat& s, const Mat& gamma);
Mat apply_congruence(const SymplecticMatrix& s, const Mat& gamma);

}  // namespace gcv
