#pragma once

// Small dense helpers shared by all modules. Matrices are always stored in
// mode-interleaved order (x1, p1, x2, p2, ...), so mode k occupies rows and
// columns [2k, 2k+1].

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace gcv {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;

double max_abs(const Mat& m);

Mat symmetrized(const Mat& m);

/// Number of modes of a square even-dimensional matrix; throws
/// Errc::invalid_dimension otherwise.
int modes_of(const Mat& m);

Mat direct_sum(const Mat& a, const Mat& b);

/// Rows/columns belonging to the listed modes, in the given order.
Mat mode_submatrix(const Mat& m, std::span<const int> row_modes,
                   std::span<const int> col_modes);
Mat mode_submatrix(const Mat& m, std::span<const int> modes);
Vec mode_subvector(const Vec& v, std::span<const int> modes);

/// Contiguous mode range [first, first + count).
std::vector<int> mode_range(int first, int count);

/// Square root of a symmetric positive semidefinite matrix through its
/// eigendecomposition; eigenvalues below `clip` are raised to `clip` (or to
/// zero when `clip` is zero).
Mat psd_sqrt(const Mat& m, double clip);

double min_eigenvalue(const Mat& symmetric);

/// Smallest eigenvalue of the Hermitian matrix re + i * im (im must be
/// antisymmetric).
double min_hermitian_eigenvalue(const Mat& re, const Mat& im);

/// Moore-Penrose inverse; singular values below rel_cutoff * s_max are
/// treated as zero.
Mat pseudo_inverse(const Mat& m, double rel_cutoff);

/// Permutation P with P * (x1,p1,...,xN,pN) = (x1..xN, p1..pN).
Mat interleaved_to_block_permutation(int modes);
/// Reorders a matrix from interleaved to (x..x, p..p) block ordering.
Mat to_block_ordering(const Mat& interleaved);
Mat to_interleaved_ordering(const Mat& block);

}  // namespace gcv
