#pragma once

// Internal bridge between DenseMatrix and Eigen. Only core/src files may
// include this; public headers stay Eigen-free.

#include <Eigen/Dense>

#include "rcurc/dense_matrix.hpp"

namespace rcurc::detail {

using EigenRM =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<EigenRM>;
using CMapRM = Eigen::Map<const EigenRM>;

inline CMapRM as_eigen(const DenseMatrix& m) {
  return CMapRM(m.raw(), static_cast<Eigen::Index>(m.rows()),
                static_cast<Eigen::Index>(m.cols()));
}

inline MapRM as_eigen(DenseMatrix& m) {
  return MapRM(m.raw(), static_cast<Eigen::Index>(m.rows()),
               static_cast<Eigen::Index>(m.cols()));
}

/// Allocate an uninitialized rows x cols DenseMatrix and hand its Eigen view
/// to `fill` for population.
template <class Fill>
DenseMatrix build_matrix(std::size_t rows, std::size_t cols, Fill&& fill) {
  alloc::TrackedVec<double> buf(rows * cols);
  DenseMatrix out = make_matrix_unchecked(rows, cols, std::move(buf));
  fill(as_eigen(out));
  return out;
}

}  // namespace rcurc::detail
