#include "rcurc/linalg.hpp"

#include <string>

#include "rcurc/errors.hpp"
#include "eigen_bridge.hpp"

namespace rcurc {

namespace {

void check_shapes_match(const DenseMatrix& a, const DenseMatrix& b,
                        const char* op) {
  if (!a.same_shape(b)) {
    throw ArgumentError(std::string(op) + ": shape mismatch " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
  }
}

}  // namespace

DenseMatrix SvdR::reconstruct() const {
  const auto r = static_cast<Eigen::Index>(rank());
  Eigen::Map<const Eigen::VectorXd> s(sigma.data(), r);
  return detail::build_matrix(u.rows(), v.rows(), [&](detail::MapRM out) {
    out.noalias() = detail::as_eigen(u) * s.asDiagonal() *
                    detail::as_eigen(v).transpose();
  });
}

SvdR truncated_svd(const DenseMatrix& m, std::size_t r) {
  const std::size_t min_dim = std::min(m.rows(), m.cols());
  if (r == 0 || r > min_dim) {
    throw ArgumentError("truncated_svd: rank " + std::to_string(r) +
                        " outside [1, " + std::to_string(min_dim) + "] for " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(detail::as_eigen(m),
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericError("truncated_svd: SVD did not converge");
  }

  SvdR out;
  const auto rr = static_cast<Eigen::Index>(r);
  out.u = detail::build_matrix(m.rows(), r, [&](detail::MapRM u) {
    u = svd.matrixU().leftCols(rr);
  });
  out.v = detail::build_matrix(m.cols(), r, [&](detail::MapRM v) {
    v = svd.matrixV().leftCols(rr);
  });
  out.sigma.assign(svd.singularValues().data(), svd.singularValues().data() + rr);
  return out;
}

DenseMatrix rank_r_project(const DenseMatrix& m, std::size_t r) {
  return truncated_svd(m, r).reconstruct();
}

DenseMatrix pinv_rank_r(const SvdR& f) {
  if (f.rank() == 0) {
    throw ArgumentError("pinv_rank_r: empty factorization");
  }
  const auto r = static_cast<Eigen::Index>(f.rank());
  const double sigma_max = f.sigma[0];
  const double tol = 1e-12 * sigma_max;

  Eigen::VectorXd inv(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    inv[i] = f.sigma[static_cast<std::size_t>(i)] > tol
                 ? 1.0 / f.sigma[static_cast<std::size_t>(i)]
                 : 0.0;
  }
  // Pseudoinverse of u * diag(sigma) * v^T is v * diag(sigma^+) * u^T.
  return detail::build_matrix(f.v.rows(), f.u.rows(), [&](detail::MapRM out) {
    out.noalias() = detail::as_eigen(f.v) * inv.asDiagonal() *
                    detail::as_eigen(f.u).transpose();
  });
}

namespace {

DenseMatrix gather(const DenseMatrix& m, const index_t* rows, std::size_t n_rows,
                   const index_t* cols, std::size_t n_cols) {
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (rows[i] >= m.rows()) {
      throw ArgumentError("submatrix: row index " + std::to_string(rows[i]) +
                          " outside " + std::to_string(m.rows()) + " rows");
    }
  }
  for (std::size_t j = 0; j < n_cols; ++j) {
    if (cols[j] >= m.cols()) {
      throw ArgumentError("submatrix: column index " + std::to_string(cols[j]) +
                          " outside " + std::to_string(m.cols()) + " columns");
    }
  }
  alloc::TrackedVec<double> buf(n_rows * n_cols);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const double* src = m.raw() + static_cast<std::size_t>(rows[i]) * m.cols();
    double* dst = buf.data() + i * n_cols;
    for (std::size_t j = 0; j < n_cols; ++j) dst[j] = src[cols[j]];
  }
  return detail::make_matrix_unchecked(n_rows, n_cols, std::move(buf));
}

alloc::TrackedVec<index_t> iota_indices(std::size_t n) {
  alloc::TrackedVec<index_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<index_t>(i);
  return v;
}

}  // namespace

DenseMatrix submatrix(const DenseMatrix& m, std::span<const index_t> rows,
                      std::span<const index_t> cols) {
  return gather(m, rows.data(), rows.size(), cols.data(), cols.size());
}

DenseMatrix submatrix(const DenseMatrix& m, AllIndices,
                      std::span<const index_t> cols) {
  const auto rows = iota_indices(m.rows());
  return gather(m, rows.data(), rows.size(), cols.data(), cols.size());
}

DenseMatrix submatrix(const DenseMatrix& m, std::span<const index_t> rows,
                      AllIndices) {
  const auto cols = iota_indices(m.cols());
  return gather(m, rows.data(), rows.size(), cols.data(), cols.size());
}

double frob_inner(const DenseMatrix& a, const DenseMatrix& b) {
  check_shapes_match(a, b, "frob_inner");
  const std::span<const double> da = a.data();
  const std::span<const double> db = b.data();
  double acc = 0.0;
  for (std::size_t k = 0; k < da.size(); ++k) acc += da[k] * db[k];
  return acc;
}

double frob_norm(const DenseMatrix& m) {
  return detail::as_eigen(m).norm();
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ArgumentError("matmul: inner dimensions " + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.rows()));
  }
  return detail::build_matrix(a.rows(), b.cols(), [&](detail::MapRM out) {
    out.noalias() = detail::as_eigen(a) * detail::as_eigen(b);
  });
}

DenseMatrix transpose(const DenseMatrix& m) {
  return detail::build_matrix(m.cols(), m.rows(), [&](detail::MapRM out) {
    out = detail::as_eigen(m).transpose();
  });
}

}  // namespace rcurc
