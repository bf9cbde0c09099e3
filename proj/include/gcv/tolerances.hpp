#pragma once

namespace gcv::tol {

// Absolute max-norm tolerance on S sigma S^T - sigma.
inline constexpr double symplectic = 1e-9;
// Max-norm tolerance when multiplying factors back together.
inline constexpr double reconstruction = 1e-8;
// Allowed negativity of the smallest eigenvalue of gamma + i sigma.
inline constexpr double uncertainty = 1e-9;
inline constexpr double symmetry = 1e-12;
inline constexpr double purity = 1e-7;
// log-negativity above this value flags a state as entangled.
inline constexpr double entangled = 1e-9;
// Witness certification: positivity and the symplectic-trace inequality.
inline constexpr double certification = 1e-9;
// Relative singular-value cutoff for pseudo-inverses.
inline constexpr double pinv_cutoff = 1e-12;
// Eigenvalue floor applied before taking matrix square roots.
inline constexpr double sqrt_clip = 1e-14;

}  // namespace gcv::tol
