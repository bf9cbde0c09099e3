#include "gcv/error.hpp"
#include "gcv/symplectic.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gcv;
using namespace gcv::testing;

TEST(Sigma, SingleModeBlock) {
  const SymplecticForm f = build_sigma(1);
  EXPECT_EQ(f.modes, 1);
  EXPECT_DOUBLE_EQ(f.matrix(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(f.matrix(1, 0), -1.0);
  EXPECT_DOUBLE_EQ(f.matrix(0, 0), 0.0);
}

TEST(Sigma, SquaresToMinusIdentity) {
  for (int n = 1; n <= 5; ++n) {
    const Mat s = sigma(n);
    EXPECT_LT(max_abs(s * s + Mat::Identity(2 * n, 2 * n)), 1e-15);
    EXPECT_LT(max_abs(s.transpose() + s), 1e-15);
  }
}

TEST(Sigma, RejectsNonPositiveModes) {
  try {
    build_sigma(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_dimension);
  }
}

TEST(Symplectic, StandardTransformations) {
  EXPECT_TRUE(is_symplectic(beam_splitter_5050().matrix()));
  EXPECT_TRUE(is_symplectic(beam_splitter(0.3).matrix()));
  EXPECT_TRUE(is_symplectic(phase_shifter(1.1).matrix()));
  EXPECT_TRUE(is_symplectic(squeezer(3.0).matrix()));
  EXPECT_TRUE(is_passive(beam_splitter_5050()));
  EXPECT_TRUE(is_passive(phase_shifter(0.4)));
  EXPECT_FALSE(is_passive(squeezer(2.0)));
}

TEST(Symplectic, PhaseShifterQuarterTurnIsSigma) {
  EXPECT_LT(max_abs(phase_shifter(M_PI / 2).matrix() - sigma(1)), 1e-15);
}

TEST(Symplectic, BeamSplitterHalfHalfMatchesDisplay) {
  Mat expected(4, 4);
  expected << 1, 0, -1, 0, 0, 1, 0, -1, 1, 0, 1, 0, 0, 1, 0, 1;
  expected /= std::sqrt(2.0);
  EXPECT_LT(max_abs(beam_splitter_5050().matrix() - expected), 1e-15);
}

TEST(Symplectic, SqueezerDomain) {
  EXPECT_THROW(squeezer(0.0), Error);
  EXPECT_THROW(squeezer(-1.0), Error);
  try {
    squeezer(-2.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::domain);
  }
}

TEST(Symplectic, TimeReversalIsNotSymplectic) {
  Mat t(2, 2);
  t << 1, 0, 0, -1;
  EXPECT_FALSE(is_symplectic(t));
  EXPECT_THROW(SymplecticMatrix{t}, Error);
}

TEST(Symplectic, InverseAndProduct) {
  Rng rng(7);
  for (int n = 1; n <= 4; ++n) {
    const SymplecticMatrix s(random_symplectic(n, rng), 1e-8);
    const Mat prod = (s * s.inverse()).matrix();
    EXPECT_LT(max_abs(prod - Mat::Identity(2 * n, 2 * n)), 1e-9);
    EXPECT_TRUE(is_symplectic(s.transpose().matrix(), 1e-8));
  }
}

TEST(Symplectic, EmbedPlacesBlock) {
  const SymplecticMatrix e = embed(squeezer(2.0), 1, 3);
  EXPECT_DOUBLE_EQ(e.matrix()(2, 2), 2.0);
  EXPECT_DOUBLE_EQ(e.matrix()(3, 3), 0.5);
  EXPECT_DOUBLE_EQ(e.matrix()(0, 0), 1.0);
  EXPECT_THROW(embed(beam_splitter_5050(), 2, 3), Error);
}

TEST(Decompositions, PolarReconstructs) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const SymplecticMatrix s(random_symplectic(n, rng, 1.5), 1e-8);
    const Decomposition d = polar_decompose(s);
    ASSERT_EQ(d.factors.size(), 2u);
    EXPECT_LT(max_abs(d.product() - s.matrix()), 1e-8);
    const Mat& p = d.factors[0].matrix();
    EXPECT_LT(max_abs(p - p.transpose()), 1e-10);
    EXPECT_GT(min_eigenvalue(p), 0.0);
    EXPECT_TRUE(is_passive(d.factors[1], 1e-8));
  }
}

TEST(Decompositions, EulerReconstructs) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const SymplecticMatrix s(random_symplectic(n, rng, 1.5), 1e-8);
    const Decomposition d = euler_decompose(s);
    ASSERT_EQ(d.factors.size(), 3u);
    EXPECT_LT(max_abs(d.product() - s.matrix()), 1e-8);
    EXPECT_TRUE(is_passive(d.factors[0], 1e-8));
    EXPECT_TRUE(is_passive(d.factors[2], 1e-8));
    for (std::size_t k = 0; k + 1 < d.squeezing_values.size(); ++k) {
      EXPECT_GE(d.squeezing_values[k], d.squeezing_values[k + 1]);
    }
    for (double v : d.squeezing_values) EXPECT_GE(v, 1.0);
  }
}

TEST(Decompositions, EulerOfSqueezerIsItself) {
  const Decomposition d = euler_decompose(squeezer(3.0));
  ASSERT_EQ(d.squeezing_values.size(), 1u);
  EXPECT_NEAR(d.squeezing_values[0], 3.0, 1e-12);
}

TEST(Congruence, ShapeChecks) {
  EXPECT_THROW(apply_congruence(Mat::Identity(2, 3), Mat::Identity(2, 2)), Error);
  const Mat rect = Mat::Ones(2, 4);
  EXPECT_EQ(apply_congruence(rect, Mat::Identity(4, 4)).rows(), 2);
}

TEST(Ordering, BlockRoundTrip) {
  Rng rng(3);
  const Mat g = random_cm_matrix(3, rng);
  EXPECT_LT(max_abs(to_interleaved_ordering(to_block_ordering(g)) - g), 1e-15);
  const Mat sb = to_block_ordering(sigma(3));
  EXPECT_DOUBLE_EQ(sb(0, 3), 1.0);
  EXPECT_DOUBLE_EQ(sb(3, 0), -1.0);
}
