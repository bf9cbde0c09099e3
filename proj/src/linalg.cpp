#include "gcv/linalg.hpp"

#include "gcv/error.hpp"

#include <algorithm>
#include <string>

namespace gcv {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::domain: return "domain";
    case Errc::precondition: return "precondition-violation";
    case Errc::symmetry_violation: return "symmetry-violation";
    case Errc::uncertainty_violation: return "uncertainty-violation";
    case Errc::degenerate_input: return "degenerate-input";
    case Errc::inconsistent_invariants: return "inconsistent-invariants";
    case Errc::singular: return "singular";
    case Errc::certification_failed: return "certification-failed";
    case Errc::invalid_plan: return "invalid-plan";
    case Errc::parse: return "parse";
  }
  return "unknown";
}

double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Mat symmetrized(const Mat& m) { return 0.5 * (m + m.transpose()); }

int modes_of(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw Error(Errc::invalid_dimension,
                "matrix is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() == 0 || m.rows() % 2 != 0) {
    throw Error(Errc::invalid_dimension,
                "matrix dimension " + std::to_string(m.rows()) +
                    " is not a positive even number");
  }
  return static_cast<int>(m.rows() / 2);
}

Mat direct_sum(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

std::vector<int> mode_range(int first, int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = first + i;
  return out;
}

Mat mode_submatrix(const Mat& m, std::span<const int> row_modes,
                   std::span<const int> col_modes) {
  Mat out(2 * static_cast<Eigen::Index>(row_modes.size()),
          2 * static_cast<Eigen::Index>(col_modes.size()));
  for (std::size_t i = 0; i < row_modes.size(); ++i) {
    for (std::size_t j = 0; j < col_modes.size(); ++j) {
      out.block<2, 2>(2 * static_cast<Eigen::Index>(i),
                      2 * static_cast<Eigen::Index>(j)) =
          m.block<2, 2>(2 * row_modes[i], 2 * col_modes[j]);
    }
  }
  return out;
}

Mat mode_submatrix(const Mat& m, std::span<const int> modes) {
  return mode_submatrix(m, modes, modes);
}

Vec mode_subvector(const Vec& v, std::span<const int> modes) {
  Vec out(2 * static_cast<Eigen::Index>(modes.size()));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    out.segment<2>(2 * static_cast<Eigen::Index>(i)) = v.segment<2>(2 * modes[i]);
  }
  return out;
}

Mat psd_sqrt(const Mat& m, double clip) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(m));
  Vec ev = es.eigenvalues().cwiseMax(clip).cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

double min_eigenvalue(const Mat& symmetric) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(symmetric),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double min_hermitian_eigenvalue(const Mat& re, const Mat& im) {
  CMat h(re.rows(), re.cols());
  h.real() = symmetrized(re);
  h.imag() = 0.5 * (im - im.transpose());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Mat pseudo_inverse(const Mat& m, double rel_cutoff) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? rel_cutoff * s(0) : 0.0;
  Vec inv = Vec::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Mat interleaved_to_block_permutation(int modes) {
  Mat p = Mat::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    p(k, 2 * k) = 1.0;
    p(modes + k, 2 * k + 1) = 1.0;
  }
  return p;
}

Mat to_block_ordering(const Mat& interleaved) {
  const Mat p = interleaved_to_block_permutation(modes_of(interleaved));
  return p * interleaved * p.transpose();
}

Mat to_interleaved_ordering(const Mat& block) {
  const Mat p = interleaved_to_block_permutation(modes_of(block));
  return p.transpose() * block * p;
}

}  // namespace gcv
