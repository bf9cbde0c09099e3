#include "gcv/covariance.hpp"
#include "gcv/error.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gcv;
using namespace gcv::testing;

TEST(Validate, AcceptsVacuumAndReference) {
  EXPECT_TRUE(validate_cm(Mat::Identity(4, 4)).ok());
  EXPECT_TRUE(validate_cm(reference_matrix()).ok());
}

TEST(Validate, RejectsSubVacuum) {
  const CmValidation v = validate_cm(0.5 * Mat::Identity(2, 2));
  EXPECT_FALSE(v.ok());
  EXPECT_EQ(v.diagnostic.failure, CmFailure::uncertainty);
  EXPECT_NEAR(v.diagnostic.min_uncertainty_eigenvalue, -0.5, 1e-12);
}

TEST(Validate, RejectsAsymmetric) {
  Mat m = Mat::Identity(2, 2);
  m(0, 1) = 1e-3;
  const CmValidation v = validate_cm(m);
  EXPECT_FALSE(v.ok());
  EXPECT_EQ(v.diagnostic.failure, CmFailure::symmetry);
  try {
    CovarianceMatrix::from_matrix(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::symmetry_violation);
  }
}

TEST(Validate, DimensionErrors) {
  EXPECT_THROW(validate_cm(Mat::Identity(3, 3)), Error);
  EXPECT_THROW(validate_cm(Mat::Identity(2, 4)), Error);
  try {
    validate_cm(Mat::Identity(3, 3));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_dimension);
  }
}

TEST(Validate, ToleranceBoundary) {
  // Eigenvalue of M + i sigma equals nu - 1 for thermal diag(nu, nu).
  EXPECT_TRUE(validate_cm((1.0 - 5e-10) * Mat::Identity(2, 2)).ok());
  EXPECT_FALSE(validate_cm((1.0 - 5e-9) * Mat::Identity(2, 2)).ok());
}

TEST(Spectrum, SingleMode) {
  Mat m(2, 2);
  m << 3, 1, 1, 1;
  const SymplecticSpectrum s = symplectic_eigenvalues(m);
  ASSERT_EQ(s.values.size(), 1u);
  EXPECT_NEAR(s.values[0], std::sqrt(2.0), 1e-12);
}

TEST(Spectrum, ReferenceMatrix) {
  const SymplecticSpectrum s = symplectic_eigenvalues(reference_matrix());
  EXPECT_NEAR(s.values[0], std::sqrt(5.5), 1e-12);
  EXPECT_NEAR(s.values[1], std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(s.product(), std::sqrt(16.5), 1e-12);
}

TEST(Spectrum, SingularGivesZeros) {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = m(1, 1) = 2.0;
  const SymplecticSpectrum s = symplectic_eigenvalues(m);
  EXPECT_NEAR(s.values[0], 2.0, 1e-12);
  EXPECT_NEAR(s.values[1], 0.0, 1e-12);
}

TEST(Spectrum, IndefiniteThrows) {
  Mat m = Mat::Identity(2, 2);
  m(1, 1) = -1.0;
  try {
    symplectic_eigenvalues(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::precondition);
  }
}

TEST(Spectrum, MatchesOracleOnRandomStates) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    const Mat g = random_cm_matrix(n, rng);
    EXPECT_LT(max_diff(symplectic_eigenvalues(g).values, oracle_symplectic_eigenvalues(g)), 1e-8);
  }
}

TEST(Spectrum, InvariantUnderSymplecticCongruence) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const Mat g = random_cm_matrix(n, rng);
    const Mat s = random_symplectic(n, rng, 0.8);
    EXPECT_LT(max_diff(symplectic_eigenvalues(g).values,
                       symplectic_eigenvalues(s * g * s.transpose()).values),
              1e-8);
  }
}

TEST(Williamson, ReferenceMatrix) {
  const WilliamsonForm w = williamson(reference_matrix());
  const Mat d = apply_congruence(w.transform, reference_matrix());
  EXPECT_LT(max_abs(d - w.diagonal()), 1e-10);
  EXPECT_NEAR(w.spectrum.values[0], std::sqrt(5.5), 1e-12);
  EXPECT_TRUE(is_symplectic(w.transform.matrix()));
}

TEST(Williamson, RoundTripRandom) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    const Mat g = random_cm_matrix(n, rng);
    const WilliamsonForm w = williamson(g);
    const Mat s = w.transform.matrix();
    EXPECT_LT(max_abs(s * g * s.transpose() - w.diagonal()), 1e-8);
    const Mat sinv = w.transform.inverse().matrix();
    EXPECT_LT(max_abs(sinv * w.diagonal() * sinv.transpose() - g), 1e-8);
  }
}

TEST(Williamson, RejectsSingular) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  try {
    williamson(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate_input);
  }
}

TEST(Simon, ReferenceInvariants) {
  const SimonInvariants inv = simon_invariants(reference_matrix());
  EXPECT_NEAR(inv.a, std::sqrt(10.5), 1e-12);
  EXPECT_NEAR(inv.b, std::sqrt(10.5), 1e-12);
  EXPECT_NEAR(inv.cd, -6.25, 1e-12);
  EXPECT_NEAR(inv.det_gamma, 16.5, 1e-12);
}

TEST(Simon, ClosedFormSpectra) {
  const SimonInvariants inv = simon_invariants(reference_matrix());
  const SymplecticSpectrum s = symplectic_eigs_from_invariants(inv, false);
  const SymplecticSpectrum pt = symplectic_eigs_from_invariants(inv, true);
  EXPECT_NEAR(s.values[0], std::sqrt(5.5), 1e-12);
  EXPECT_NEAR(s.values[1], std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(pt.values[0], std::sqrt(33.0), 1e-12);
  EXPECT_NEAR(pt.values[1], 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Simon, InconsistentInvariants) {
  SimonInvariants inv{1.0, 1.0, 0.0, 100.0};
  try {
    symplectic_eigs_from_invariants(inv, false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::inconsistent_invariants);
  }
}

TEST(Simon, ResolveCd) {
  const auto [c, d] = resolve_cd(simon_invariants(pair_matrix(2.0, 1.5)));
  EXPECT_NEAR(c, 1.5, 1e-12);
  EXPECT_NEAR(d, -1.5, 1e-12);
}

TEST(Simon, NormalFormRandom) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const CovarianceMatrix g = random_cm(2, rng);
    const SimonNormalForm snf = simon_normal_form(g);
    const Mat back = apply_congruence(snf.local, g.matrix());
    EXPECT_LT(max_abs(back - snf.normal_form.matrix()), 1e-7);
    EXPECT_GE(snf.c, 0.0);
    EXPECT_GE(snf.c + 1e-12, std::abs(snf.d));
    const SimonInvariants inv = simon_invariants(g);
    EXPECT_NEAR(snf.c * snf.d, inv.cd, 1e-7 * std::max(1.0, std::abs(inv.cd)));
    // Ordinary eigenvalues of the normal form from the closed form.
    std::vector<double> ev = simon_normal_form_eigenvalues(snf.a, snf.b, snf.c, snf.d);
    std::sort(ev.begin(), ev.end());
    Eigen::SelfAdjointEigenSolver<Mat> es(snf.normal_form.matrix());
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev[static_cast<std::size_t>(i)], es.eigenvalues()(i), 1e-8);
  }
}

TEST(States, Constructors) {
  EXPECT_TRUE(is_pure(vacuum_cm(3)));
  EXPECT_FALSE(is_squeezed(vacuum_cm(1)));
  const CovarianceMatrix sq = squeezed_cm(0.5, 0.0);
  EXPECT_NEAR(sq.matrix()(0, 0), std::exp(1.0), 1e-12);
  EXPECT_NEAR(sq.matrix()(1, 1), std::exp(-1.0), 1e-12);
  EXPECT_TRUE(is_pure(sq));
  EXPECT_TRUE(is_squeezed(sq));
  // squeezed_cm(r, 0) is the squeezer e^r applied to the vacuum.
  EXPECT_LT(max_abs(apply_congruence(squeezer(std::exp(0.5)), Mat::Identity(2, 2)) - sq.matrix()), 1e-12);
  EXPECT_TRUE(is_pure(squeezed_cm(0.7, 1.3)));

  const double nus[] = {2.0, 1.0};
  const CovarianceMatrix th = thermal_cm(nus);
  EXPECT_FALSE(is_pure(th));
  const double bad[] = {0.5};
  EXPECT_THROW(thermal_cm(bad), Error);
  EXPECT_NEAR(thermal_nu(1e-3), 2000.0, 1.0);
  EXPECT_GT(thermal_nu(5.0), 1.0);
  EXPECT_NEAR(thermal_nu(50.0), 1.0, 1e-15);

  const CovarianceMatrix tms = two_mode_squeezed_cm(0.4);
  EXPECT_TRUE(is_pure(tms));
  EXPECT_NEAR(tms.matrix()(0, 2), std::sinh(0.8), 1e-12);
  EXPECT_NEAR(tms.matrix()(1, 3), -std::sinh(0.8), 1e-12);

  const std::complex<double> alphas[] = {{1.0, -2.0}};
  const GaussianState coh = coherent_state(alphas);
  EXPECT_NEAR(coh.displacement(0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(coh.displacement(1), -2.0 * std::sqrt(2.0), 1e-15);
}

TEST(States, DisplacementLengthChecked) {
  EXPECT_THROW(GaussianState(vacuum_cm(2), Vec::Zero(3)), Error);
}

TEST(Conventions, InvolutionAndSpectrum) {
  Rng rng(10);
  const Mat g = random_cm_matrix(3, rng);
  EXPECT_LT(max_abs(convert_convention(convert_convention(g)) - g), 1e-12);
  const CovarianceMatrix cap = CovarianceMatrix::from_matrix(convert_convention(g), Convention::capital);
  EXPECT_LT(max_abs(cap.in_convention(Convention::gamma).matrix() - g), 1e-12);
  EXPECT_LT(max_diff(symplectic_eigenvalues(g).values, symplectic_eigenvalues(cap.matrix()).values), 1e-10);
}

TEST(Reduction, PrincipalSubmatrixIsValid) {
  Rng rng(13);
  const CovarianceMatrix g = random_cm(4, rng);
  const int modes[] = {3, 1};
  const CovarianceMatrix r = reduced_cm(g, modes);
  EXPECT_EQ(r.modes(), 2);
  EXPECT_DOUBLE_EQ(r.matrix()(0, 0), g.matrix()(6, 6));
  const int bad[] = {4};
  EXPECT_THROW(reduced_cm(g, bad), Error);
}
