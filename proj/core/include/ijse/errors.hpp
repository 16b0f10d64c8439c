#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ijse {

// Distribution or model parameter outside its domain (sigma < 0, shape <= 0, nu <= 2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Cholesky failure on a matrix that is not (numerically) symmetric positive definite.
class DecompositionError : public std::runtime_error {
 public:
  DecompositionError(std::size_t pivot, double value);

  std::size_t pivot() const noexcept { return pivot_; }
  double pivot_value() const noexcept { return value_; }

 private:
  std::size_t pivot_;
  double value_;
};

// Posterior draws that violate a model invariant, e.g. a non-positive variance draw.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed CSV input. Row and column are 1-based; column 0 means "whole row".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t col = 0);

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace ijse
