#include "ijse/small_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ijse/errors.hpp"

namespace ijse {

SmallMatrix::SmallMatrix(std::size_t dim, double fill) : dim_(dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw std::invalid_argument("SmallMatrix: dimension must be in [1, 8], got " +
                                std::to_string(dim));
  }
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) (*this)(r, c) = fill;
}

SmallMatrix::SmallMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SmallMatrix(rows.size()) {
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != dim_) throw std::invalid_argument("SmallMatrix: rows must form a square");
    std::size_t c = 0;
    for (double v : row) (*this)(r, c++) = v;
    ++r;
  }
}

SmallMatrix SmallMatrix::identity(std::size_t dim) {
  SmallMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SmallMatrix SmallMatrix::diagonal(std::span<const double> values) {
  SmallMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

bool operator==(const SmallMatrix& a, const SmallMatrix& b) {
  if (a.dim_ != b.dim_) return false;
  for (std::size_t r = 0; r < a.dim_; ++r)
    for (std::size_t c = 0; c < a.dim_; ++c)
      if (a(r, c) != b(r, c)) return false;
  return true;
}

SmallMatrix chol_factor(const SmallMatrix& a) {
  const std::size_t p = a.dim();
  SmallMatrix lower(p);
  for (std::size_t j = 0; j < p; ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
    if (!(pivot >= kCholeskyPivotFloor)) throw DecompositionError(j, pivot);
    const double diag = std::sqrt(pivot);
    lower(j, j) = diag;
    for (std::size_t i = j + 1; i < p; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k);
      lower(i, j) = v / diag;
    }
  }
  return lower;
}

std::vector<double> chol_solve(const SmallMatrix& lower, std::span<const double> rhs) {
  const std::size_t p = lower.dim();
  if (rhs.size() != p) throw std::invalid_argument("chol_solve: rhs length mismatch");
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < i; ++k) x[i] -= lower(i, k) * x[k];
    x[i] /= lower(i, i);
  }
  for (std::size_t i = p; i-- > 0;) {
    for (std::size_t k = i + 1; k < p; ++k) x[i] -= lower(k, i) * x[k];
    x[i] /= lower(i, i);
  }
  return x;
}

SmallMatrix chol_inverse(const SmallMatrix& lower) {
  const std::size_t p = lower.dim();
  SmallMatrix inv(p);
  std::vector<double> unit(p, 0.0);
  for (std::size_t c = 0; c < p; ++c) {
    unit.assign(p, 0.0);
    unit[c] = 1.0;
    const auto col = chol_solve(lower, unit);
    for (std::size_t r = 0; r < p; ++r) inv(r, c) = col[r];
  }
  // Symmetrize away round-off.
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t c = r + 1; c < p; ++c) {
      const double v = 0.5 * (inv(r, c) + inv(c, r));
      inv(r, c) = v;
      inv(c, r) = v;
    }
  return inv;
}

void draw_mvnormal_factored(std::span<const double> mean, const SmallMatrix& lower, double scale,
                            RandomStream& stream, std::span<double> out) {
  const std::size_t p = lower.dim();
  if (mean.size() != p || out.size() != p) {
    throw std::invalid_argument("draw_mvnormal: dimension mismatch");
  }
  std::array<double, SmallMatrix::kMaxDim> z{};
  for (std::size_t i = 0; i < p; ++i) z[i] = stream.standard_normal();
  for (std::size_t i = 0; i < p; ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k <= i; ++k) v += lower(i, k) * z[k];
    out[i] = mean[i] + scale * v;
  }
}

std::vector<double> draw_mvnormal(std::span<const double> mean, const SmallMatrix& cov,
                                  RandomStream& stream) {
  const SmallMatrix lower = chol_factor(cov);
  std::vector<double> out(mean.size());
  draw_mvnormal_factored(mean, lower, 1.0, stream, out);
  return out;
}

}  // namespace ijse
