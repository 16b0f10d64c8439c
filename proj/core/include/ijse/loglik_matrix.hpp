#pragma once

#include <cstddef>
#include <string_view>

#include "ijse/dense_matrix.hpp"

namespace ijse {

/// What a row of a log-likelihood matrix represents.
enum class UnitKind { observation, cluster };

std::string_view to_string(UnitKind kind);
UnitKind parse_unit_kind(std::string_view text);

/// Units x draws matrix of per-unit log-likelihood contributions L_u^(t).
/// Invariants: at least two units, every entry finite.
class LogLikMatrix {
 public:
  LogLikMatrix(DenseMatrix values, UnitKind kind);

  std::size_t units() const noexcept { return values_.rows(); }
  std::size_t draws() const noexcept { return values_.cols(); }
  UnitKind kind() const noexcept { return kind_; }
  const DenseMatrix& values() const noexcept { return values_; }

 private:
  DenseMatrix values_;
  UnitKind kind_;
};

}  // namespace ijse
