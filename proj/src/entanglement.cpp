#include "gcv/entanglement.hpp"

#include "gcv/error.hpp"

#include <algorithm>
#include <cmath>

namespace gcv {

ModeSplit ModeSplit::default_for(int modes) {
  if (modes < 2) {
    throw Error(Errc::invalid_dimension, "a bipartite split needs at least two modes");
  }
  return {1, modes - 1};
}

ModeSplit ModeSplit::parse(const std::string& text) {
  const auto pos = text.find_first_of(":|");
  if (pos == std::string::npos) {
    throw Error(Errc::parse, "split must look like A:B, got '" + text + "'");
  }
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string sa = text.substr(0, pos), sb = text.substr(pos + 1);
    ModeSplit out{std::stoi(sa, &used_a), std::stoi(sb, &used_b)};
    if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw Error(Errc::parse, "split must look like A:B, got '" + text + "'");
  }
}

std::string ModeSplit::to_string() const {
  return std::to_string(n_a) + ":" + std::to_string(n_b);
}

void check_split(ModeSplit split, int modes) {
  if (split.n_a < 1 || split.n_b < 1 || split.modes() != modes) {
    throw Error(Errc::invalid_dimension, "split " + split.to_string() + " does not fit " +
                                             std::to_string(modes) + " modes");
  }
}

bool ppt_sufficient(ModeSplit split) noexcept { return split.n_a == 1 || split.n_b == 1; }

Mat partial_transpose_cm(const Mat& gamma, ModeSplit split, Convention convention) {
  check_split(split, modes_of(gamma));
  // Flipping momenta of A is a diagonal +-1 congruence: negate every entry
  // whose row or column (but not both) is a momentum of A.
  const double flip = convention == Convention::gamma ? -1.0 : 1.0;
  Vec m = Vec::Ones(gamma.rows());
  for (int k = 0; k < split.n_a; ++k) {
    m(2 * k) = -flip;
    m(2 * k + 1) = flip;
  }
  return m.asDiagonal() * gamma * m.asDiagonal();
}

Mat partial_transpose_cm(const CovarianceMatrix& gamma, ModeSplit split) {
  return partial_transpose_cm(gamma.matrix(), split, gamma.convention());
}

std::pair<Mat, ModeSplit> swap_parties(const Mat& gamma, ModeSplit split) {
  check_split(split, modes_of(gamma));
  std::vector<int> order = mode_range(split.n_a, split.n_b);
  for (int k = 0; k < split.n_a; ++k) order.push_back(k);
  return {mode_submatrix(gamma, order), ModeSplit{split.n_b, split.n_a}};
}

double log_negativity_of_spectrum(const SymplecticSpectrum& pt_spectrum) {
  double e = 0.0;
  for (double nu : pt_spectrum.values) {
    if (nu < 1.0) e -= std::log(nu);
  }
  return e;
}

bool is_ppt(const CovarianceMatrix& gamma, ModeSplit split, double tol) {
  return symplectic_eigenvalues(partial_transpose_cm(gamma, split)).min() >= 1.0 - tol;
}

NegativityReport log_negativity(const CovarianceMatrix& gamma, ModeSplit split) {
  NegativityReport out;
  out.pt_spectrum = symplectic_eigenvalues(partial_transpose_cm(gamma, split));
  out.log_negativity = log_negativity_of_spectrum(out.pt_spectrum);
  out.entangled = out.log_negativity > tol::entangled;
  out.ppt_sufficient = ppt_sufficient(split);
  return out;
}

double log_negativity_closed_form(const CovarianceMatrix& gamma) {
  // Symplectic spectra coincide in both conventions, so the invariants of
  // either representation will do.
  return log_negativity_of_spectrum(
      symplectic_eigs_from_invariants(simon_invariants(gamma), /*transposed=*/true));
}

bool entangled_implies_squeezed_check(const CovarianceMatrix& gamma, ModeSplit split) {
  if (!log_negativity(gamma, split).entangled) return true;
  return is_squeezed(gamma);
}

}  // namespace gcv
