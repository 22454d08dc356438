#pragma once

#include <span>

#include "rcurc/dense_matrix.hpp"

namespace rcurc {

/// Rank-r singular value decomposition u * diag(sigma) * v^T.
///
/// Invariants: u is m x r and v is n x r with orthonormal columns (within
/// 1e-10); sigma holds r nonnegative values in nonincreasing order.
struct SvdR {
  DenseMatrix u;
  alloc::TrackedVec<double> sigma;
  DenseMatrix v;

  std::size_t rank() const { return sigma.size(); }

  /// Recompose u * diag(sigma) * v^T.
  DenseMatrix reconstruct() const;
};

/// Best rank-r factorization of m: the full deterministic SVD truncated to
/// the r leading singular triples. Throws ArgumentError when
/// r > min(rows, cols) or r == 0, NumericError if the SVD fails to converge.
SvdR truncated_svd(const DenseMatrix& m, std::size_t r);

/// Best rank-r approximation of m (truncated_svd followed by reconstruct).
DenseMatrix rank_r_project(const DenseMatrix& m, std::size_t r);

/// Moore-Penrose pseudoinverse computed from a factorization: singular values
/// sigma_i <= 1e-12 * max(sigma) are treated as zero and inverted to zero.
/// For f = svd(M) with M m x n the result is n x m.
DenseMatrix pinv_rank_r(const SvdR& f);

/// Tag selecting every row (or column) in submatrix().
struct AllIndices {};
inline constexpr AllIndices all_indices{};

/// Extract rows/cols by 0-based index lists. Indices must be in range;
/// duplicates and arbitrary order are honored as given.
DenseMatrix submatrix(const DenseMatrix& m, std::span<const index_t> rows,
                      std::span<const index_t> cols);
DenseMatrix submatrix(const DenseMatrix& m, AllIndices,
                      std::span<const index_t> cols);
DenseMatrix submatrix(const DenseMatrix& m, std::span<const index_t> rows,
                      AllIndices);

/// Frobenius inner product <a, b> = sum_ij a_ij * b_ij (shapes must match).
double frob_inner(const DenseMatrix& a, const DenseMatrix& b);

/// Frobenius norm sqrt(<m, m>).
double frob_norm(const DenseMatrix& m);

/// Plain product a * b (inner dimensions must agree).
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// Transpose copy.
DenseMatrix transpose(const DenseMatrix& m);

}  // namespace rcurc
