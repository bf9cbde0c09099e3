#include "gcv/gaussian_ops.hpp"

#include "gcv/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gcv {

namespace {

struct Partition {
  std::vector<int> kept;
  std::vector<int> measured;
};

Partition partition(int modes, std::span<const int> measured) {
  Partition p;
  std::vector<bool> hit(static_cast<std::size_t>(modes), false);
  for (int k : measured) {
    if (k < 0 || k >= modes || hit[static_cast<std::size_t>(k)]) {
      throw Error(Errc::invalid_dimension, "measured mode " + std::to_string(k) +
                                               " is out of range or repeated");
    }
    hit[static_cast<std::size_t>(k)] = true;
    p.measured.push_back(k);
  }
  for (int k = 0; k < modes; ++k) {
    if (!hit[static_cast<std::size_t>(k)]) p.kept.push_back(k);
  }
  if (p.kept.empty() || p.measured.empty()) {
    throw Error(Errc::invalid_dimension, "projection needs at least one measured and one kept mode");
  }
  return p;
}

struct Blocks {
  Mat a, b, c;
  Vec d_a, d_b;
};

Blocks split_state(const GaussianState& state, const Partition& p) {
  const CovarianceMatrix g = state.cm.in_convention(Convention::gamma);
  Vec d = state.displacement;
  if (state.cm.convention() == Convention::capital) d = sigma(state.modes()).transpose() * d;
  return {mode_submatrix(g.matrix(), p.kept), mode_submatrix(g.matrix(), p.measured),
          mode_submatrix(g.matrix(), p.kept, p.measured), mode_subvector(d, p.kept),
          mode_subvector(d, p.measured)};
}

// gamma' = A - C K C^T, d' = d_A - C K (d_B - d_w) for a given K.
ProjectionResult finish(const Blocks& bl, const Mat& k, const Vec& d_w, std::vector<int> measured) {
  Mat cm = symmetrized(bl.a - bl.c * k * bl.c.transpose());
  Vec d = bl.d_a - bl.c * k * (bl.d_b - d_w);
  // Conditional states are always valid; allow for rounding in the check.
  return {CovarianceMatrix::from_matrix(cm, Convention::gamma, 1e-7), std::move(d),
          std::move(measured)};
}

}  // namespace

ProjectionResult schur_project(const GaussianState& state, std::span<const int> measured,
                               const CovarianceMatrix& target_cm, const Vec& target_displacement) {
  const Partition p = partition(state.modes(), measured);
  if (target_cm.modes() != static_cast<int>(p.measured.size())) {
    throw Error(Errc::invalid_dimension, "target state must cover exactly the measured modes");
  }
  if (target_displacement.size() != target_cm.matrix().rows()) {
    throw Error(Errc::invalid_dimension, "target displacement has the wrong length");
  }
  const Blocks bl = split_state(state, p);
  const Mat gw = target_cm.in_convention(Convention::gamma).matrix();
  Vec dw = target_displacement;
  if (target_cm.convention() == Convention::capital) dw = sigma(target_cm.modes()).transpose() * dw;

  const Mat m = bl.b + gw;
  Eigen::FullPivLU<Mat> lu(m);
  // B + gamma_w is a sum of two positive matrices; treat near-rank-loss as singular.
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) {
    throw Error(Errc::singular, "B + target CM is singular; use the homodyne limit instead");
  }
  return finish(bl, lu.inverse(), dw, p.measured);
}

CovarianceMatrix homodyne_pointer_cm(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(Errc::domain, "homodyne width must be positive and finite");
  }
  Mat capital = Mat::Zero(2, 2);
  capital(0, 0) = 1.0 / (eps * eps);
  capital(1, 1) = eps * eps;
  return CovarianceMatrix::from_matrix(capital, Convention::capital)
      .in_convention(Convention::gamma);
}

ProjectionResult homodyne_project(const GaussianState& state, int mode, double eps, double x) {
  const int measured[] = {mode};
  Vec dw(2);
  dw << x, 0.0;
  return schur_project(state, measured, homodyne_pointer_cm(eps), dw);
}

ProjectionResult homodyne_project_limit(const GaussianState& state, int mode, double x) {
  const int measured[] = {mode};
  const Partition p = partition(state.modes(), measured);
  const Blocks bl = split_state(state, p);
  Mat pi = Mat::Zero(2, 2);
  pi(0, 0) = 1.0;
  const Mat k = pseudo_inverse(pi * bl.b * pi, tol::pinv_cutoff);
  Vec dw(2);
  dw << x, 0.0;
  return finish(bl, k, dw, p.measured);
}

ProjectionResult coherent_project(const GaussianState& state, int mode, const Vec& alpha_displacement) {
  const int measured[] = {mode};
  return schur_project(state, measured, vacuum_cm(1), alpha_displacement);
}

CoherentPipelineResult coherent_project_via_homodyne(const GaussianState& state, double eps,
                                                     double x, double y) {
  if (state.modes() != 2) {
    throw Error(Errc::invalid_dimension, "the homodyne pipeline acts on a two-mode state");
  }
  const CovarianceMatrix g = state.cm.in_convention(Convention::gamma);
  Vec d = state.displacement;
  if (state.cm.convention() == Convention::capital) d = sigma(2).transpose() * d;

  // Adjoin a vacuum as mode 3, mix it with mode 2, rotate mode 3 by sigma.
  const Mat joint = direct_sum(g.matrix(), Mat::Identity(2, 2));
  Vec d3 = Vec::Zero(6);
  d3.head(4) = d;
  const SymplecticMatrix t = embed(phase_shifter(M_PI / 2.0), 2, 3) * embed(beam_splitter_5050(), 1, 3);
  GaussianState mixed(CovarianceMatrix::from_matrix(apply_congruence(t, joint)), t.matrix() * d3);

  const ProjectionResult first = homodyne_project(mixed, 1, eps, x);
  const ProjectionResult second =
      homodyne_project(GaussianState(first.cm, first.displacement), 1, eps, y);

  // The two outcomes fix a coherent amplitude on mode 2. A finite pointer width
  // shrinks the readout towards the prior by 1 / (1 + eps^2).
  const double gain = std::sqrt(2.0) / (1.0 + eps * eps);
  Vec dw(2);
  dw << gain * x, gain * y;
  ProjectionResult closed = coherent_project(GaussianState(g, d), 1, dw);

  CoherentPipelineResult out{ProjectionResult{second.cm, second.displacement, {1, 2}},
                             std::move(closed), 0.0};
  out.max_difference = max_abs(out.pipeline.cm.matrix() - out.closed_form.cm.matrix());
  return out;
}

CovarianceMatrix add_classical_noise(const CovarianceMatrix& gamma, const Mat& delta) {
  if (delta.rows() != gamma.matrix().rows() || delta.cols() != gamma.matrix().cols()) {
    throw Error(Errc::invalid_dimension, "noise matrix has the wrong shape");
  }
  if (max_abs(delta - delta.transpose()) > tol::symmetry * std::max(1.0, max_abs(delta))) {
    throw Error(Errc::symmetry_violation, "noise matrix is not symmetric");
  }
  const double lmin = min_eigenvalue(delta);
  if (lmin < -tol::uncertainty) {
    std::ostringstream os;
    os << "classical noise must be positive semidefinite, min eigenvalue " << lmin;
    throw Error(Errc::precondition, os.str());
  }
  return CovarianceMatrix::from_matrix(gamma.matrix() + symmetrized(delta), gamma.convention());
}

ChannelSpec ChannelSpec::from_dilation(const SymplecticMatrix& full, const CovarianceMatrix& env) {
  const auto ne = static_cast<Eigen::Index>(2 * env.modes());
  const Eigen::Index total = full.matrix().rows();
  if (ne >= total) {
    throw Error(Errc::invalid_dimension, "environment leaves no system modes");
  }
  const Eigen::Index ns = total - ne;
  return ChannelSpec{full.matrix().topLeftCorner(ns, ns), full.matrix().topRightCorner(ns, ne),
                     env.in_convention(Convention::gamma), full};
}

Mat ChannelSpec::noise() const {
  return apply_congruence(coupling_block, environment_cm.matrix());
}

ChannelOutput apply_channel(const ChannelSpec& spec, const CovarianceMatrix& gamma_s) {
  const CovarianceMatrix g = gamma_s.in_convention(Convention::gamma);
  if (g.matrix().rows() != spec.system_block.cols()) {
    throw Error(Errc::invalid_dimension, "channel and state dimensions differ");
  }
  Mat noise = spec.noise();
  const double margin = noise_constraint_margin(spec.system_block, noise);
  if (margin < -tol::uncertainty) {
    std::ostringstream os;
    os << "channel violates the noise constraint, margin " << margin;
    throw Error(Errc::precondition, os.str());
  }
  Mat out = apply_congruence(spec.system_block, g.matrix()) + noise;
  return {CovarianceMatrix::from_matrix(out, Convention::gamma, 1e-7), std::move(noise)};
}

double noise_constraint_margin(const Mat& s_s, const Mat& g) {
  const int n = modes_of(g);
  if (s_s.rows() != g.rows() || s_s.cols() != g.cols()) {
    throw Error(Errc::invalid_dimension, "S_s and G must have the same shape");
  }
  const Mat sig = sigma(n);
  return min_hermitian_eigenvalue(g, sig - s_s * sig * s_s.transpose());
}

bool check_noise_constraint(const Mat& s_s, const Mat& g, double tol) {
  return noise_constraint_margin(s_s, g) >= -tol;
}

SymplecticMatrix collective_transform() { return embed(beam_splitter_5050(), 1, 4); }

CollectiveDet collective_det_sum(const CovarianceMatrix& gamma) {
  if (gamma.modes() != 2) {
    throw Error(Errc::invalid_dimension, "collective determinant trick needs a two-mode CM");
  }
  const Mat g = gamma.in_convention(Convention::gamma).matrix();
  CollectiveDet out;
  out.transformed = apply_congruence(collective_transform(), direct_sum(g, g));
  out.central_block = out.transformed.block<2, 2>(2, 2);
  out.entries = {out.central_block(0, 0), out.central_block(0, 1), out.central_block(1, 1)};
  out.det_sum = 4.0 * (out.entries[0] * out.entries[2] - out.entries[1] * out.entries[1]);
  out.det_direct = (g.topLeftCorner<2, 2>() + g.bottomRightCorner<2, 2>()).determinant();
  return out;
}

}  // namespace gcv
