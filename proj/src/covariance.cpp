#include "gcv/covariance.hpp"

#include "gcv/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gcv {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double symmetry_error(const Mat& m) { return max_abs(m - m.transpose()); }

double symmetry_tolerance(const Mat& m) { return tol::symmetry * std::max(1.0, max_abs(m)); }

}  // namespace

CmValidation validate_cm(const Mat& m, double tol_unc, Convention convention) {
  const int n = modes_of(m);
  CmValidation out;
  out.diagnostic.symmetry_error = symmetry_error(m);
  if (out.diagnostic.symmetry_error > symmetry_tolerance(m)) {
    out.diagnostic.failure = CmFailure::symmetry;
    out.diagnostic.message =
        "matrix is not symmetric: ||M - M^T||_max = " + fmt_double(out.diagnostic.symmetry_error);
    return out;
  }
  const Mat sym = symmetrized(m);
  out.diagnostic.min_uncertainty_eigenvalue = min_hermitian_eigenvalue(sym, sigma(n));
  if (out.diagnostic.min_uncertainty_eigenvalue < -tol_unc) {
    out.diagnostic.failure = CmFailure::uncertainty;
    out.diagnostic.message = "uncertainty relation violated: min eig(M + i sigma) = " +
                             fmt_double(out.diagnostic.min_uncertainty_eigenvalue);
    return out;
  }
  out.cm = CovarianceMatrix(sym, convention);
  return out;
}

CovarianceMatrix CovarianceMatrix::from_matrix(const Mat& m, Convention convention,
                                               double tol_unc) {
  CmValidation v = validate_cm(m, tol_unc, convention);
  if (!v.ok()) {
    throw Error(v.diagnostic.failure == CmFailure::symmetry ? Errc::symmetry_violation
                                                            : Errc::uncertainty_violation,
                v.diagnostic.message);
  }
  return std::move(*v.cm);
}

CovarianceMatrix CovarianceMatrix::in_convention(Convention target) const {
  if (target == convention_) return *this;
  return CovarianceMatrix(convert_convention(m_), target);
}

GaussianState::GaussianState(CovarianceMatrix c, Vec d) : cm(std::move(c)), displacement(std::move(d)) {
  if (displacement.size() != 2 * cm.modes()) {
    throw Error(Errc::invalid_dimension, "displacement length " +
                                             std::to_string(displacement.size()) +
                                             " does not match " + std::to_string(cm.modes()) +
                                             " modes");
  }
}

GaussianState::GaussianState(CovarianceMatrix c)
    : cm(std::move(c)), displacement(Vec::Zero(2 * cm.modes())) {}

double SymplecticSpectrum::sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double SymplecticSpectrum::product() const {
  return std::accumulate(values.begin(), values.end(), 1.0, std::multiplies<>());
}

SymplecticSpectrum symplectic_eigenvalues(const Mat& a) {
  const int n = modes_of(a);
  const Mat sym = symmetrized(a);
  const double lmin = min_eigenvalue(sym);
  if (lmin < -1e-9 * std::max(1.0, max_abs(sym))) {
    throw Error(Errc::precondition,
                "symplectic eigenvalues need a positive semidefinite matrix, min eigenvalue " +
                    fmt_double(lmin));
  }
  // i sigma A and i A^{1/2} sigma A^{1/2} share their spectrum; the latter is
  // Hermitian, so its eigenvalues come out real and sorted.
  const Mat root = psd_sqrt(sym, 0.0);
  CMat h = CMat::Zero(2 * n, 2 * n);
  h.imag() = root * sigma(n) * root;
  h.imag() = 0.5 * (h.imag() - h.imag().transpose()).eval();
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  SymplecticSpectrum out;
  out.values.reserve(static_cast<std::size_t>(n));
  for (int k = 2 * n - 1; k >= n; --k) out.values.push_back(std::max(0.0, es.eigenvalues()(k)));
  return out;
}

Mat WilliamsonForm::diagonal() const {
  const auto n = static_cast<Eigen::Index>(spectrum.values.size());
  Mat d = Mat::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    d(2 * k, 2 * k) = d(2 * k + 1, 2 * k + 1) = spectrum.values[static_cast<std::size_t>(k)];
  }
  return d;
}

WilliamsonForm williamson(const Mat& positive) {
  const int n = modes_of(positive);
  const Mat sym = symmetrized(positive);
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  const Vec& lambda = es.eigenvalues();
  if (lambda(0) <= 1e-12 * std::max(1.0, lambda(lambda.size() - 1))) {
    throw Error(Errc::degenerate_input,
                "Williamson form needs a strictly positive matrix, min eigenvalue " +
                    fmt_double(lambda(0)));
  }
  const Mat& v = es.eigenvectors();
  const Mat root = v * lambda.cwiseSqrt().asDiagonal() * v.transpose();
  const Mat inv_root = v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();

  // K = gamma^{1/2} sigma gamma^{1/2} is antisymmetric. For an eigenvector
  // u = x + i y of iK with eigenvalue nu > 0 we have K x = nu y and K y = -nu x,
  // so the columns (sqrt2 y, sqrt2 x) bring K to nu [[0, 1], [-1, 0]].
  Mat k = root * sigma(n) * root;
  k = 0.5 * (k - k.transpose()).eval();
  CMat h = CMat::Zero(2 * n, 2 * n);
  h.imag() = k;
  Eigen::SelfAdjointEigenSolver<CMat> ces(h);

  Mat o(2 * n, 2 * n);
  Vec omega_sqrt(2 * n);
  SymplecticSpectrum spectrum;
  for (int j = 0; j < n; ++j) {
    const int idx = 2 * n - 1 - j;
    const double nu = ces.eigenvalues()(idx);
    const auto u = ces.eigenvectors().col(idx);
    o.col(2 * j) = std::sqrt(2.0) * u.imag();
    o.col(2 * j + 1) = std::sqrt(2.0) * u.real();
    omega_sqrt(2 * j) = omega_sqrt(2 * j + 1) = std::sqrt(nu);
    spectrum.values.push_back(nu);
  }
  Mat s = omega_sqrt.asDiagonal() * o.transpose() * inv_root;
  return WilliamsonForm{SymplecticMatrix(std::move(s), 1e-7), std::move(spectrum)};
}

WilliamsonForm williamson(const CovarianceMatrix& gamma) { return williamson(gamma.matrix()); }

SimonInvariants simon_invariants(const Mat& gamma) {
  if (modes_of(gamma) != 2) {
    throw Error(Errc::invalid_dimension, "Simon invariants are defined for two modes only");
  }
  SimonInvariants inv;
  inv.a = std::sqrt(gamma.topLeftCorner<2, 2>().determinant());
  inv.b = std::sqrt(gamma.bottomRightCorner<2, 2>().determinant());
  inv.cd = gamma.topRightCorner<2, 2>().determinant();
  inv.det_gamma = gamma.determinant();
  return inv;
}

SimonInvariants simon_invariants(const CovarianceMatrix& gamma) {
  return simon_invariants(gamma.matrix());
}

std::pair<double, double> resolve_cd(const SimonInvariants& inv) {
  const double ab = inv.a * inv.b;
  if (!(ab > 0.0)) {
    throw Error(Errc::inconsistent_invariants, "a * b must be positive to resolve c and d");
  }
  const double a2b2 = ab * ab;
  const double sum_sq = (a2b2 + inv.cd * inv.cd - inv.det_gamma) / ab;  // c^2 + d^2
  double disc = sum_sq * sum_sq - 4.0 * inv.cd * inv.cd;
  if (sum_sq < -1e-10 * std::max(1.0, a2b2) || disc < -1e-10 * std::max(1.0, sum_sq * sum_sq)) {
    throw Error(Errc::inconsistent_invariants,
                "no real (c, d) reproduces the invariants: c^2 + d^2 = " + fmt_double(sum_sq));
  }
  disc = std::max(0.0, disc);
  const double c2 = 0.5 * (std::max(0.0, sum_sq) + std::sqrt(disc));
  const double c = std::sqrt(c2);
  const double d = c > 0.0 ? inv.cd / c : 0.0;
  return {c, d};
}

SymplecticSpectrum symplectic_eigs_from_invariants(const SimonInvariants& inv, bool transposed,
                                                   double tol) {
  const double sign = transposed ? -1.0 : 1.0;
  const double s = inv.a * inv.a + inv.b * inv.b + sign * 2.0 * inv.cd;
  double disc = s * s - 4.0 * inv.det_gamma;
  if (!std::isfinite(disc) || disc < -tol * std::max(1.0, s * s)) {
    throw Error(Errc::inconsistent_invariants,
                "negative discriminant " + fmt_double(disc) + " in the two-mode spectrum");
  }
  disc = std::max(0.0, disc);
  const double upper = 0.5 * (s + std::sqrt(disc));
  if (upper < -tol * std::max(1.0, std::abs(s))) {
    throw Error(Errc::inconsistent_invariants, "negative squared symplectic eigenvalue");
  }
  // The lower root via the product nu1^2 nu2^2 = det gamma avoids cancellation.
  double lower = upper > 0.0 ? inv.det_gamma / upper : 0.0;
  if (lower < -tol * std::max(1.0, std::abs(s))) {
    throw Error(Errc::inconsistent_invariants, "negative squared symplectic eigenvalue");
  }
  lower = std::max(0.0, lower);
  return SymplecticSpectrum{{std::sqrt(std::max(0.0, upper)), std::sqrt(lower)}};
}

SimonNormalForm simon_normal_form(const CovarianceMatrix& gamma) {
  if (gamma.modes() != 2) {
    throw Error(Errc::invalid_dimension, "Simon normal form is defined for two modes only");
  }
  const Mat& g = gamma.matrix();
  const WilliamsonForm wa = williamson(Mat(g.topLeftCorner<2, 2>()));
  const WilliamsonForm wb = williamson(Mat(g.bottomRightCorner<2, 2>()));
  const Mat c_local = wa.transform.matrix() * g.topRightCorner<2, 2>() * wb.transform.matrix().transpose();

  Eigen::JacobiSVD<Mat> svd(c_local, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixU();
  Mat v = svd.matrixV();
  double c = svd.singularValues()(0);
  double d = svd.singularValues()(1);
  // Only rotations are symplectic in one mode; fold reflections into sign(d).
  if (u.determinant() < 0.0) {
    u.col(1) *= -1.0;
    d = -d;
  }
  if (v.determinant() < 0.0) {
    v.col(1) *= -1.0;
    d = -d;
  }
  const Mat s1 = u.transpose() * wa.transform.matrix();
  const Mat s2 = v.transpose() * wb.transform.matrix();

  const double a = wa.spectrum.values[0];
  const double b = wb.spectrum.values[0];
  Mat snf = Mat::Zero(4, 4);
  snf(0, 0) = snf(1, 1) = a;
  snf(2, 2) = snf(3, 3) = b;
  snf(0, 2) = snf(2, 0) = c;
  snf(1, 3) = snf(3, 1) = d;

  return SimonNormalForm{SymplecticMatrix(direct_sum(s1, s2), 1e-7),
                         CovarianceMatrix::from_matrix(snf, Convention::gamma, 1e-7), a, b, c, d};
}

std::vector<double> simon_normal_form_eigenvalues(double a, double b, double c, double d) {
  const double mid = 0.5 * (a + b);
  const double rc = 0.5 * std::sqrt((a - b) * (a - b) + 4.0 * c * c);
  const double rd = 0.5 * std::sqrt((a - b) * (a - b) + 4.0 * d * d);
  return {mid + rc, mid - rc, mid + rd, mid - rd};
}

bool is_pure(const CovarianceMatrix& gamma, double tol) {
  return std::abs(gamma.matrix().determinant() - 1.0) <= tol;
}

bool is_squeezed(const CovarianceMatrix& gamma, double tol) {
  return min_eigenvalue(gamma.matrix()) < 1.0 - tol;
}

CovarianceMatrix vacuum_cm(int modes) {
  if (modes < 1) throw Error(Errc::invalid_dimension, "vacuum needs at least one mode");
  return CovarianceMatrix::from_matrix(Mat::Identity(2 * modes, 2 * modes));
}

GaussianState coherent_state(std::span<const std::complex<double>> alphas) {
  const int n = static_cast<int>(alphas.size());
  Vec d(2 * n);
  for (int k = 0; k < n; ++k) {
    d(2 * k) = std::sqrt(2.0) * alphas[static_cast<std::size_t>(k)].real();
    d(2 * k + 1) = std::sqrt(2.0) * alphas[static_cast<std::size_t>(k)].imag();
  }
  return GaussianState(vacuum_cm(n), std::move(d));
}

CovarianceMatrix squeezed_cm(double r, double phi) {
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  Mat m(2, 2);
  m << ch + sh * std::cos(phi), sh * std::sin(phi), sh * std::sin(phi), ch - sh * std::cos(phi);
  return CovarianceMatrix::from_matrix(m);
}

CovarianceMatrix thermal_cm(std::span<const double> nus) {
  const int n = static_cast<int>(nus.size());
  if (n < 1) throw Error(Errc::invalid_dimension, "thermal state needs at least one mode");
  Mat m = Mat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const double nu = nus[static_cast<std::size_t>(k)];
    if (!(nu >= 1.0)) {
      throw Error(Errc::domain, "thermal occupation factor must be >= 1, got " + fmt_double(nu));
    }
    m(2 * k, 2 * k) = m(2 * k + 1, 2 * k + 1) = nu;
  }
  return CovarianceMatrix::from_matrix(m);
}

double thermal_nu(double beta_omega) {
  if (!(beta_omega > 0.0)) {
    throw Error(Errc::domain, "beta * omega must be positive");
  }
  return 1.0 / std::tanh(0.5 * beta_omega);
}

CovarianceMatrix two_mode_squeezed_cm(double r) {
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  Mat m = Mat::Zero(4, 4);
  m.diagonal().setConstant(ch);
  m(0, 2) = m(2, 0) = sh;
  m(1, 3) = m(3, 1) = -sh;
  return CovarianceMatrix::from_matrix(m);
}

Mat convert_convention(const Mat& m) {
  const Mat s = sigma(modes_of(m));
  return s * m * s.transpose();
}

CovarianceMatrix reduced_cm(const CovarianceMatrix& gamma, std::span<const int> modes) {
  for (int k : modes) {
    if (k < 0 || k >= gamma.modes()) {
      throw Error(Errc::invalid_dimension, "mode index " + std::to_string(k) + " out of range");
    }
  }
  return CovarianceMatrix::from_matrix(mode_submatrix(gamma.matrix(), modes),
                                       gamma.convention());
}

}  // namespace gcv
