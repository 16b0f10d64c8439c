#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "ijse/random.hpp"

namespace ijse {

/// Square row-major matrix of dimension p <= 8, stored inline.
class SmallMatrix {
 public:
  static constexpr std::size_t kMaxDim = 8;

  SmallMatrix() = default;
  explicit SmallMatrix(std::size_t dim, double fill = 0.0);
  SmallMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SmallMatrix identity(std::size_t dim);
  static SmallMatrix diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return dim_; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * kMaxDim + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * kMaxDim + c]; }

  friend bool operator==(const SmallMatrix& a, const SmallMatrix& b);

 private:
  std::size_t dim_ = 0;
  std::array<double, kMaxDim * kMaxDim> values_{};
};

/// Pivot below which a Cholesky factorization is declared to have failed.
inline constexpr double kCholeskyPivotFloor = 1e-12;

/// Lower-triangular L with L * L^T == a. No pivoting; throws
/// DecompositionError naming the first pivot < kCholeskyPivotFloor.
SmallMatrix chol_factor(const SmallMatrix& a);

/// Solves (L L^T) x = rhs given the Cholesky factor L.
std::vector<double> chol_solve(const SmallMatrix& lower, std::span<const double> rhs);

/// Inverse of L L^T given its Cholesky factor.
SmallMatrix chol_inverse(const SmallMatrix& lower);

/// mean + scale * L z with z i.i.d. standard normal; writes into out.
void draw_mvnormal_factored(std::span<const double> mean, const SmallMatrix& lower, double scale,
                            RandomStream& stream, std::span<double> out);

/// mean + L z where L = chol_factor(cov).
std::vector<double> draw_mvnormal(std::span<const double> mean, const SmallMatrix& cov,
                                  RandomStream& stream);

}  // namespace ijse
