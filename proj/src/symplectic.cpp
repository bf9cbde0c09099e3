#include "gcv/symplectic.hpp"

#include "gcv/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gcv {

SymplecticForm build_sigma(int modes) {
  if (modes < 1) {
    throw Error(Errc::invalid_dimension,
                "symplectic form needs at least one mode, got " + std::to_string(modes));
  }
  Mat s = Mat::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    s(2 * k, 2 * k + 1) = 1.0;
    s(2 * k + 1, 2 * k) = -1.0;
  }
  return {modes, std::move(s)};
}

Mat sigma(int modes) { return build_sigma(modes).matrix; }

bool is_symplectic(const Mat& m, double tol) {
  const int n = modes_of(m);
  const Mat s = sigma(n);
  return max_abs(m * s * m.transpose() - s) <= tol;
}

SymplecticMatrix::SymplecticMatrix(Mat m, double tol) : m_(std::move(m)) {
  const int n = modes_of(m_);
  const Mat s = sigma(n);
  const double err = max_abs(m_ * s * m_.transpose() - s);
  if (err > tol) {
    throw Error(Errc::precondition,
                "matrix is not symplectic: ||S sigma S^T - sigma||_max = " +
                    std::to_string(err));
  }
  const double det = m_.determinant();
  if (std::abs(det - 1.0) > std::max(tol, 1e-9) * std::max(1.0, std::abs(det))) {
    throw Error(Errc::precondition,
                "symplectic matrix has determinant " + std::to_string(det));
  }
}

SymplecticMatrix SymplecticMatrix::identity(int modes) {
  return SymplecticMatrix(Mat::Identity(2 * modes, 2 * modes), Trusted{});
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  const Mat s = sigma(modes());
  return SymplecticMatrix(s.transpose() * m_.transpose() * s, Trusted{});
}

SymplecticMatrix SymplecticMatrix::transpose() const {
  return SymplecticMatrix(m_.transpose(), Trusted{});
}

SymplecticMatrix operator*(const SymplecticMatrix& a, const SymplecticMatrix& b) {
  if (a.modes() != b.modes()) {
    throw Error(Errc::invalid_dimension, "mode count mismatch in symplectic product");
  }
  return SymplecticMatrix(a.m_ * b.m_, SymplecticMatrix::Trusted{});
}

bool is_passive(const SymplecticMatrix& s, double tol) {
  const Mat& m = s.matrix();
  return max_abs(m.transpose() * m - Mat::Identity(m.rows(), m.cols())) <= tol;
}

SymplecticMatrix beam_splitter(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat m = Mat::Zero(4, 4);
  m.topLeftCorner(2, 2) = c * Mat::Identity(2, 2);
  m.topRightCorner(2, 2) = -s * Mat::Identity(2, 2);
  m.bottomLeftCorner(2, 2) = s * Mat::Identity(2, 2);
  m.bottomRightCorner(2, 2) = c * Mat::Identity(2, 2);
  return SymplecticMatrix(std::move(m));
}

SymplecticMatrix beam_splitter_5050() { return beam_splitter(M_PI / 4.0); }

SymplecticMatrix phase_shifter(double angle) {
  Mat m(2, 2);
  m << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
  return SymplecticMatrix(std::move(m));
}

SymplecticMatrix squeezer(double d) {
  if (!(d > 0.0)) {
    throw Error(Errc::domain, "squeezing parameter must be positive, got " + std::to_string(d));
  }
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = d;
  m(1, 1) = 1.0 / d;
  return SymplecticMatrix(std::move(m));
}

SymplecticMatrix embed(const SymplecticMatrix& s, int first_mode, int total_modes) {
  if (first_mode < 0 || first_mode + s.modes() > total_modes) {
    throw Error(Errc::invalid_dimension, "embedding does not fit in the target system");
  }
  Mat m = Mat::Identity(2 * total_modes, 2 * total_modes);
  m.block(2 * first_mode, 2 * first_mode, 2 * s.modes(), 2 * s.modes()) = s.matrix();
  return SymplecticMatrix(std::move(m));
}

SymplecticMatrix direct_sum(const SymplecticMatrix& a, const SymplecticMatrix& b) {
  return SymplecticMatrix(direct_sum(a.matrix(), b.matrix()));
}

Mat Decomposition::product() const {
  Mat out = factors.front().matrix();
  for (std::size_t i = 1; i < factors.size(); ++i) out = out * factors[i].matrix();
  return out;
}

namespace {

struct PolarParts {
  Mat p;
  Mat p_inv;
  Eigen::SelfAdjointEigenSolver<Mat> eig;
};

PolarParts polar_parts(const Mat& s) {
  PolarParts out;
  out.eig.compute(symmetrized(s * s.transpose()));
  const Vec lambda = out.eig.eigenvalues().cwiseMax(tol::sqrt_clip);
  const Mat& v = out.eig.eigenvectors();
  out.p = symmetrized(v * lambda.cwiseSqrt().asDiagonal() * v.transpose());
  out.p_inv = symmetrized(v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose());
  return out;
}

}  // namespace

Decomposition polar_decompose(const SymplecticMatrix& s) {
  const PolarParts parts = polar_parts(s.matrix());
  Decomposition out;
  out.kind = DecompositionKind::polar;
  out.factors.emplace_back(parts.p);
  out.factors.emplace_back(parts.p_inv * s.matrix());
  return out;
}

Decomposition euler_decompose(const SymplecticMatrix& s) {
  const int n = s.modes();
  const PolarParts parts = polar_parts(s.matrix());
  const Mat sig = sigma(n);
  const Mat& vecs = parts.eig.eigenvectors();
  const Mat& p = parts.p;

  // Symplectic Gram-Schmidt over the eigenvectors of P in descending order:
  // if P v = d v then P sigma^T v = (1/d) sigma^T v, so the pairs
  // (v_k, sigma^T v_k) diagonalize P with an orthogonal symplectic basis.
  Mat u1 = Mat::Zero(2 * n, 2 * n);
  std::vector<double> d;
  int accepted = 0;
  for (Eigen::Index col = vecs.cols() - 1; col >= 0 && accepted < n; --col) {
    Vec r = vecs.col(col);
    for (int j = 0; j < 2 * accepted; ++j) r -= u1.col(j).dot(r) * u1.col(j);
    const double norm = r.norm();
    if (norm < 0.5) continue;
    r /= norm;
    u1.col(2 * accepted) = r;
    u1.col(2 * accepted + 1) = sig.transpose() * r;
    d.push_back(std::max(1.0, r.dot(p * r)));
    ++accepted;
  }
  if (accepted != n) {
    throw Error(Errc::degenerate_input, "euler decomposition failed to build a symplectic basis");
  }

  // Sort modes by squeezing, largest first.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return d[static_cast<std::size_t>(a)] > d[static_cast<std::size_t>(b)];
  });
  Mat u1_sorted(2 * n, 2 * n);
  std::vector<double> d_sorted;
  for (int k = 0; k < n; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    u1_sorted.col(2 * k) = u1.col(2 * src);
    u1_sorted.col(2 * k + 1) = u1.col(2 * src + 1);
    d_sorted.push_back(d[static_cast<std::size_t>(src)]);
  }

  Mat diag = Mat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    diag(2 * k, 2 * k) = d_sorted[static_cast<std::size_t>(k)];
    diag(2 * k + 1, 2 * k + 1) = 1.0 / d_sorted[static_cast<std::size_t>(k)];
  }
  const Mat u = parts.p_inv * s.matrix();

  Decomposition out;
  out.kind = DecompositionKind::euler;
  out.factors.emplace_back(u1_sorted);
  out.factors.emplace_back(diag);
  out.factors.emplace_back(u1_sorted.transpose() * u);
  out.squeezing_values = std::move(d_sorted);
  return out;
}

Mat apply_congruence(const Mat& s, const Mat& gamma) {
  if (gamma.rows() != gamma.cols() || s.cols() != gamma.rows()) {
    throw Error(Errc::invalid_dimension,
                "congruence shapes do not conform: S is " + std::to_string(s.rows()) + "x" +
                    std::to_string(s.cols()) + ", gamma is " + std::to_string(gamma.rows()) +
                    "x" + std::to_string(gamma.cols()));
  }
  return symmetrized(s * gamma * s.transpose());
}

Mat apply_congruence(const SymplecticMatrix& s, const Mat& gamma) {
  return apply_congruence(s.matrix(), gamma);
}

}  // namespace gcv
