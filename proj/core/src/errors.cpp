#include "ijse/errors.hpp"

namespace ijse {

DecompositionError::DecompositionError(std::size_t pivot, double value)
    : std::runtime_error("Cholesky decomposition failed at pivot " + std::to_string(pivot) +
                         " (value " + std::to_string(value) + "); matrix is not positive definite"),
      pivot_(pivot),
      value_(value) {}

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t col)
    : std::runtime_error(what), row_(row), col_(col) {}

}  // namespace ijse
