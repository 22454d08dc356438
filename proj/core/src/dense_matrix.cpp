#include "rcurc/dense_matrix.hpp"

#include <cmath>
#include <string>

#include "rcurc/errors.hpp"

namespace rcurc {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         alloc::TrackedVec<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ArgumentError("DenseMatrix: buffer holds " + std::to_string(data_.size()) +
                        " values, expected " + std::to_string(rows_ * cols_));
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!std::isfinite(data_[k])) {
      throw ArgumentError("DenseMatrix: non-finite value at flat index " +
                          std::to_string(k));
    }
  }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         alloc::TrackedVec<double>&& data, Unchecked)
    : rows_(rows), cols_(cols), data_(std::move(data)) {}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  alloc::TrackedVec<double> buf;
  buf.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw ArgumentError("DenseMatrix::from_rows: ragged row lengths");
    }
    buf.insert(buf.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(buf));
}

double DenseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) {
    throw ArgumentError("DenseMatrix::at: index (" + std::to_string(i) + "," +
                        std::to_string(j) + ") outside " + std::to_string(rows_) +
                        "x" + std::to_string(cols_));
  }
  return (*this)(i, j);
}

namespace detail {
DenseMatrix make_matrix_unchecked(std::size_t rows, std::size_t cols,
                                  alloc::TrackedVec<double>&& data) {
  return DenseMatrix(rows, cols, std::move(data), DenseMatrix::Unchecked{});
}
}  // namespace detail

}  // namespace rcurc
