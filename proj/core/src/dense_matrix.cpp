#include "ijse/dense_matrix.hpp"

#include <stdexcept>

namespace ijse {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw std::invalid_argument("DenseMatrix: value count does not match rows * cols");
  }
}

std::vector<double> DenseMatrix::column(std::size_t c) const {
  if (c >= cols_) throw std::out_of_range("DenseMatrix::column: index out of range");
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

}  // namespace ijse
