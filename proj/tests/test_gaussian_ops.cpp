#include "gcv/entanglement.hpp"
#include "gcv/error.hpp"
#include "gcv/gaussian_ops.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gcv;
using namespace gcv::testing;

namespace {

// Direct oracle: A - C (B + gw)^{-1} C^T for measuring the last mode.
Mat schur_oracle(const Mat& g, const Mat& gw) {
  const Eigen::Index k = g.rows() - 2;
  return g.topLeftCorner(k, k) -
         g.topRightCorner(k, 2) * (g.bottomRightCorner(2, 2) + gw).inverse() * g.bottomLeftCorner(2, k);
}

}  // namespace

TEST(Schur, ProductStateUnchanged) {
  Rng rng(1);
  const Mat a = random_cm_matrix(1, rng);
  const GaussianState s(CovarianceMatrix::from_matrix(direct_sum(a, random_cm_matrix(1, rng))));
  const int measured[] = {1};
  const ProjectionResult r = schur_project(s, measured, vacuum_cm(1), Vec::Zero(2));
  EXPECT_LT(max_abs(r.cm.matrix() - a), 1e-12);
  EXPECT_LT(r.displacement.norm(), 1e-15);
}

TEST(Schur, CoherentOnReference) {
  const GaussianState s(CovarianceMatrix::from_matrix(reference_matrix()));
  const ProjectionResult r = coherent_project(s, 1, Vec::Zero(2));
  Mat expected = Mat::Zero(2, 2);
  expected(0, 0) = 3.5 - 6.25 / 4.5;
  expected(1, 1) = 3.0 - 6.25 / 4.0;
  EXPECT_LT(max_abs(r.cm.matrix() - expected), 1e-12);
  EXPECT_NEAR(r.cm.matrix()(0, 0), 2.1111, 1e-4);
  EXPECT_NEAR(r.cm.matrix()(1, 1), 1.4375, 1e-12);
}

TEST(Schur, MatchesOracleAndStaysValid) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 3;
    const CovarianceMatrix g = random_cm(n, rng);
    const CovarianceMatrix target = random_cm(1, rng);
    const int measured[] = {n - 1};
    const ProjectionResult r = schur_project(GaussianState(g), measured, target, Vec::Zero(2));
    EXPECT_LT(max_abs(r.cm.matrix() - schur_oracle(g.matrix(), target.matrix())), 1e-9);
    EXPECT_TRUE(validate_cm(r.cm.matrix()).ok());
  }
}

TEST(Schur, CapitalTargetConverted) {
  Rng rng(3);
  const CovarianceMatrix g = random_cm(2, rng);
  const CovarianceMatrix t = random_cm(1, rng);
  const CovarianceMatrix t_cap = t.in_convention(Convention::capital);
  const int measured[] = {1};
  const ProjectionResult a = schur_project(GaussianState(g), measured, t, Vec::Zero(2));
  const ProjectionResult b = schur_project(GaussianState(g), measured, t_cap, Vec::Zero(2));
  EXPECT_LT(max_abs(a.cm.matrix() - b.cm.matrix()), 1e-12);
}

TEST(Schur, DisplacementUpdate) {
  const GaussianState s(CovarianceMatrix::from_matrix(reference_matrix()), Vec::Zero(4));
  Vec dw(2);
  dw << 1.0, -2.0;
  const int measured[] = {1};
  const ProjectionResult r = schur_project(s, measured, vacuum_cm(1), dw);
  // d' = -C (B + I)^{-1} (0 - dw)
  const Mat c = reference_matrix().topRightCorner(2, 2);
  const Mat binv = (reference_matrix().bottomRightCorner(2, 2) + Mat::Identity(2, 2)).inverse();
  EXPECT_LT((r.displacement - c * binv * dw).norm(), 1e-12);
}

TEST(Schur, ModeListErrors) {
  const GaussianState s(vacuum_cm(2));
  const int bad[] = {2};
  EXPECT_THROW(schur_project(s, bad, vacuum_cm(1), Vec::Zero(2)), Error);
  const int all[] = {0, 1};
  EXPECT_THROW(schur_project(s, all, vacuum_cm(2), Vec::Zero(4)), Error);
  const int one[] = {1};
  EXPECT_THROW(schur_project(s, one, vacuum_cm(2), Vec::Zero(4)), Error);
}

TEST(Homodyne, PointerIsPure) {
  for (double eps : {0.01, 0.1, 1.0, 10.0}) {
    EXPECT_NEAR(homodyne_pointer_cm(eps).matrix().determinant(), 1.0, 1e-9);
  }
  EXPECT_THROW(homodyne_pointer_cm(0.0), Error);
  EXPECT_THROW(homodyne_pointer_cm(-1.0), Error);
}

TEST(Homodyne, WidthOneIsCoherent) {
  Rng rng(4);
  const GaussianState s(random_cm(2, rng));
  EXPECT_LT(max_abs(homodyne_project(s, 1, 1.0).cm.matrix() - coherent_project(s, 1, Vec::Zero(2)).cm.matrix()),
            1e-12);
}

TEST(Homodyne, LimitMatchesSmallWidth) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const GaussianState s(random_cm(2, rng));
    const Mat lim = homodyne_project_limit(s, 1).cm.matrix();
    const Mat fin = homodyne_project(s, 1, 1e-5).cm.matrix();
    EXPECT_LT(max_abs(lim - fin), 1e-6);
    // Closed form: A - C Pi C^T / B_xx.
    const Mat g = s.cm.matrix();
    const Mat expected = g.topLeftCorner(2, 2) - g.block(0, 2, 2, 1) * g.block(0, 2, 2, 1).transpose() / g(2, 2);
    EXPECT_LT(max_abs(lim - expected), 1e-10);
  }
}

TEST(Homodyne, ProductStateUnchanged) {
  Rng rng(6);
  const Mat a = random_cm_matrix(1, rng);
  const GaussianState s(CovarianceMatrix::from_matrix(direct_sum(a, random_cm_matrix(1, rng))));
  EXPECT_LT(max_abs(homodyne_project(s, 1, 0.3, 2.0).cm.matrix() - a), 1e-12);
  EXPECT_LT(max_abs(homodyne_project_limit(s, 1, 2.0).cm.matrix() - a), 1e-12);
}

TEST(Homodyne, OutcomeMovesOnlyDisplacement) {
  const GaussianState s(CovarianceMatrix::from_matrix(reference_matrix()));
  const ProjectionResult r0 = homodyne_project(s, 1, 0.5, 0.0);
  const ProjectionResult r1 = homodyne_project(s, 1, 0.5, 3.0);
  EXPECT_LT(max_abs(r0.cm.matrix() - r1.cm.matrix()), 1e-15);
  EXPECT_GT(r1.displacement.norm(), 0.1);
}

TEST(Pipeline, EpsilonCancels) {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const GaussianState s(random_cm(2, rng));
    for (double eps : {0.1, 1.0, 10.0}) {
      const CoherentPipelineResult r = coherent_project_via_homodyne(s, eps);
      EXPECT_LE(r.max_difference, 1e-10);
      EXPECT_LT(max_abs(r.closed_form.cm.matrix() - schur_oracle(s.cm.matrix(), Mat::Identity(2, 2))), 1e-10);
    }
  }
}

TEST(Pipeline, ReferenceAndProduct) {
  const CoherentPipelineResult r = coherent_project_via_homodyne(GaussianState(CovarianceMatrix::from_matrix(reference_matrix())), 0.3);
  EXPECT_NEAR(r.pipeline.cm.matrix()(0, 0), 3.5 - 6.25 / 4.5, 1e-10);
  EXPECT_NEAR(r.pipeline.cm.matrix()(1, 1), 1.4375, 1e-10);
  Rng rng(8);
  const Mat a = random_cm_matrix(1, rng);
  const CoherentPipelineResult p =
      coherent_project_via_homodyne(GaussianState(CovarianceMatrix::from_matrix(direct_sum(a, random_cm_matrix(1, rng)))), 2.0);
  EXPECT_LT(max_abs(p.pipeline.cm.matrix() - a), 1e-10);
  EXPECT_THROW(coherent_project_via_homodyne(GaussianState(vacuum_cm(3))), Error);
}

TEST(Pipeline, DisplacementMatchesComposition) {
  Rng rng(9);
  const GaussianState s(random_cm(2, rng), Vec::Random(4));
  for (double eps : {0.1, 0.7, 10.0}) {
    const CoherentPipelineResult r = coherent_project_via_homodyne(s, eps, 0.4, -1.1);
    EXPECT_LT((r.pipeline.displacement - r.closed_form.displacement).norm(), 1e-9);
  }
}

TEST(ClassicalNoise, Basics) {
  const CovarianceMatrix v = vacuum_cm(1);
  EXPECT_LT(max_abs(add_classical_noise(v, Mat::Zero(2, 2)).matrix() - v.matrix()), 1e-15);
  const CovarianceMatrix th = add_classical_noise(v, Mat::Identity(2, 2));
  EXPECT_NEAR(williamson(th).spectrum.values[0], 2.0, 1e-12);
  Mat bad = Mat::Identity(2, 2);
  bad(1, 1) = -0.5;
  EXPECT_THROW(add_classical_noise(v, bad), Error);
}

TEST(ClassicalNoise, SeparableStaysSeparable) {
  Rng rng(10);
  for (int i = 0; i < 100; ++i) {
    const CovarianceMatrix g = random_separable(1, 1, rng);
    EXPECT_TRUE(is_ppt(g, {1, 1}));
    EXPECT_TRUE(is_ppt(add_classical_noise(g, random_psd(4, rng)), {1, 1}));
  }
}

TEST(Channel, TimeReversalNeedsNoiseTwo) {
  Mat t(2, 2);
  t << 1, 0, 0, -1;
  EXPECT_GE(noise_constraint_margin(t, 2.0 * Mat::Identity(2, 2)), -1e-10);
  EXPECT_LT(noise_constraint_margin(t, 1.999 * Mat::Identity(2, 2)), 0.0);
  EXPECT_LT(noise_constraint_margin(t, 1.9 * Mat::Identity(2, 2)), 0.0);
  EXPECT_TRUE(check_noise_constraint(t, 2.0 * Mat::Identity(2, 2)));
}

TEST(Channel, SymplecticWithoutNoise) {
  Rng rng(11);
  const Mat s = random_symplectic(2, rng);
  EXPECT_GE(noise_constraint_margin(s, Mat::Zero(4, 4)), -1e-9);
  Mat shrink = 0.5 * Mat::Identity(2, 2);
  EXPECT_LT(noise_constraint_margin(shrink, Mat::Zero(2, 2)), 0.0);
}

TEST(Channel, BeamSplitterDilation) {
  // Loss channel: mix the system with a vacuum environment.
  const ChannelSpec spec = ChannelSpec::from_dilation(beam_splitter(0.4), vacuum_cm(1));
  EXPECT_TRUE(check_noise_constraint(spec.system_block, spec.noise()));
  const ChannelOutput out = apply_channel(spec, vacuum_cm(1));
  EXPECT_LT(max_abs(out.cm.matrix() - Mat::Identity(2, 2)), 1e-12);
  const ChannelOutput sq = apply_channel(spec, squeezed_cm(0.5, 0.0));
  EXPECT_TRUE(validate_cm(sq.cm.matrix()).ok());
  // Joint state stays valid before reduction.
  const Mat joint = apply_congruence(spec.full_transform, direct_sum(squeezed_cm(0.5, 0.0).matrix(), Mat::Identity(2, 2)));
  EXPECT_TRUE(validate_cm(joint).ok());
  EXPECT_LT(max_abs(joint.topLeftCorner(2, 2) - sq.cm.matrix()), 1e-12);

  const ChannelSpec id = ChannelSpec::from_dilation(SymplecticMatrix::identity(2), vacuum_cm(1));
  EXPECT_LT(max_abs(apply_channel(id, vacuum_cm(1)).cm.matrix() - Mat::Identity(2, 2)), 1e-15);
}

TEST(Collective, Reference) {
  const CollectiveDet r = collective_det_sum(CovarianceMatrix::from_matrix(reference_matrix()));
  EXPECT_NEAR(r.det_direct, 42.0, 1e-12);
  EXPECT_NEAR(r.det_sum, 42.0, 1e-12);
  EXPECT_NEAR(r.central_block(0, 0), 3.5, 1e-12);
  EXPECT_NEAR(r.central_block(1, 1), 3.0, 1e-12);
}

TEST(Collective, EqualBlocksAndRandom) {
  Rng rng(12);
  const CollectiveDet pair = collective_det_sum(CovarianceMatrix::from_matrix(pair_matrix(2.0, 1.5)));
  EXPECT_LT(max_abs(pair.central_block - 2.0 * Mat::Identity(2, 2)), 1e-12);
  EXPECT_NEAR(pair.det_sum, 16.0, 1e-12);
  for (int i = 0; i < 100; ++i) {
    const CollectiveDet r = collective_det_sum(random_cm(2, rng));
    EXPECT_NEAR(r.det_sum, r.det_direct, 1e-10 * std::max(1.0, std::abs(r.det_direct)));
    EXPECT_TRUE(validate_cm(r.transformed).ok());
  }
}
