#pragma once

#include "rcurc/dense_matrix.hpp"
#include "rcurc/rng.hpp"
#include "rcurc/sampling.hpp"

namespace rcurc {

/// Ground-truth instance: y = x_true + s_true with x_true low rank and
/// s_true sparse with bounded row/column occupancy.
struct SyntheticProblem {
  DenseMatrix x_true;
  DenseMatrix s_true;
  DenseMatrix y;
  std::size_t rank = 0;
  double alpha = 0.0;  ///< per-row/column sparsity bound used at generation
  double amp = 0.0;    ///< outlier amplitude multiplier c
};

/// Random rank-r matrix W * V^T with W (n1 x r) and V (n2 x r) filled with
/// standard normal draws, W first then V, each row-major.
/// Requires 1 <= r <= min(n1, n2).
DenseMatrix gen_low_rank(std::size_t n1, std::size_t n2, std::size_t r, Rng& rng);

/// Sparse outlier matrix for x: per row, floor(alpha * n2) distinct columns
/// drawn uniformly, rejecting columns that have reached floor(alpha * n1)
/// hits so that both row and column occupancy stay <= alpha. If at some row
/// no acceptable column remains, that row simply receives fewer entries.
/// Values are then drawn uniformly from [-c*m, c*m] (m = mean |x_ij|) in
/// row-major support order. Requires 0 <= alpha < 0.5 and c > 0; alpha >= 0.5
/// throws ArgumentError.
DenseMatrix gen_sparse_outliers(const DenseMatrix& x, double alpha, double c,
                                Rng& rng);

/// Generate x_true, s_true (in that rng order) and y = x_true + s_true.
SyntheticProblem make_synthetic_problem(std::size_t n1, std::size_t n2,
                                        std::size_t r, double alpha, double c,
                                        Rng& rng);

/// Incoherence of x with respect to its rank-r SVD U S V^T:
///   mu = max( (n1/r) * max_i ||U_{i,:}||^2 , (n2/r) * max_j ||V_{j,:}||^2 ).
/// Always >= 1 for a matrix of rank >= r.
double incoherence_mu(const DenseMatrix& x, std::size_t r);

/// Sparsity parameter of s: the largest fraction of nonzeros in any single
/// row or column (exact zero comparison).
double sparsity_alpha(const DenseMatrix& s);

struct CurCheckResult {
  bool ok = false;
  double rel_err = 0.0;  ///< ||x - C U^+ R||_F / ||x||_F (absolute if x == 0)
};

/// Verify the cross decomposition identity x = C U^+ R for row set I and
/// column set J, where C = x(:,J), U = x(I,J), R = x(I,:). ok means
/// rel_err <= 1e-8, which holds whenever rank(U) == rank(x).
CurCheckResult cur_exact_check(const DenseMatrix& x, const IndexSet& I,
                               const IndexSet& J);

}  // namespace rcurc
