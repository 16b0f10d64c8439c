#include "ijse/loglik_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ijse/errors.hpp"

namespace ijse {

std::string_view to_string(UnitKind kind) {
  return kind == UnitKind::observation ? "observation" : "cluster";
}

UnitKind parse_unit_kind(std::string_view text) {
  if (text == "observation") return UnitKind::observation;
  if (text == "cluster") return UnitKind::cluster;
  throw std::invalid_argument("unknown unit kind '" + std::string(text) +
                              "' (expected observation or cluster)");
}

LogLikMatrix::LogLikMatrix(DenseMatrix values, UnitKind kind)
    : values_(std::move(values)), kind_(kind) {
  if (values_.rows() < 2) {
    throw std::invalid_argument("LogLikMatrix: need at least 2 units, got " +
                                std::to_string(values_.rows()));
  }
  for (std::size_t u = 0; u < values_.rows(); ++u)
    for (std::size_t t = 0; t < values_.cols(); ++t)
      if (!std::isfinite(values_(u, t))) {
        throw DataError("LogLikMatrix: non-finite entry at unit " + std::to_string(u + 1) +
                        ", draw " + std::to_string(t + 1));
      }
}

}  // namespace ijse
