#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>

#include "rcurc/alloc_stats.hpp"

namespace rcurc {

/// Index type for row/column coordinates. 32 bits covers every supported
/// shape (the largest realistic matrix is video frames with ~10^5 rows) at
/// half the memory of size_t in the index-heavy observation structures.
using index_t = std::uint32_t;

class DenseMatrix;

namespace detail {
/// Internal factory that skips the finiteness scan. Compute kernels use it
/// for buffers they fill from already-finite inputs.
DenseMatrix make_matrix_unchecked(std::size_t rows, std::size_t cols,
                                  alloc::TrackedVec<double>&& data);
}  // namespace detail

/// Row-major dense matrix of real64 values, the universal numeric container.
///
/// Invariants: data().size() == rows()*cols(); every value is finite when the
/// matrix is constructed from caller-supplied data (NaN/Inf are rejected).
class DenseMatrix {
 public:
  DenseMatrix() = default;  ///< empty 0x0 placeholder

  /// Zero-initialized rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of a row-major buffer; throws ArgumentError if the
  /// buffer length is not rows*cols or any value is non-finite.
  DenseMatrix(std::size_t rows, std::size_t cols, alloc::TrackedVec<double> data);

  /// Convenience literal constructor for tests and small fixtures:
  /// DenseMatrix::from_rows({{1,2},{3,4}}).
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }

  /// Bounds-checked access; throws ArgumentError when out of range.
  double at(std::size_t i, std::size_t j) const;

  std::span<const double> data() const { return {data_.data(), data_.size()}; }
  std::span<double> data() { return {data_.data(), data_.size()}; }

  const double* raw() const { return data_.data(); }
  double* raw() { return data_.data(); }

  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  struct Unchecked {};
  DenseMatrix(std::size_t rows, std::size_t cols, alloc::TrackedVec<double>&& data,
              Unchecked);

  friend DenseMatrix detail::make_matrix_unchecked(std::size_t, std::size_t,
                                                   alloc::TrackedVec<double>&&);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  alloc::TrackedVec<double> data_;
};

}  // namespace rcurc
