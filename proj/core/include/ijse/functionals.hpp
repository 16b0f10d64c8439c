#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ijse/dense_matrix.hpp"

namespace ijse {

/// g1..g6; `external` tags draws read from a file whose functional is unknown.
enum class FunctionalId { g1, g2, g3, g4, g5, g6, external };

std::string_view to_string(FunctionalId id);
FunctionalId parse_functional_id(std::string_view text);

struct FunctionalDraws {
  FunctionalId id = FunctionalId::external;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// Indirect effect a_t b_t.
FunctionalDraws g1_indirect(std::span<const double> a, std::span<const double> b);

/// Standardized indirect effect a b / sqrt((c' + a b)^2 + b^2 sigma_M2 + sigma_Y2),
/// the model-implied sd(Y) under Var(X) = 1.
FunctionalDraws g2_std_indirect(std::span<const double> a, std::span<const double> b,
                                std::span<const double> c_prime,
                                std::span<const double> sigma_m2,
                                std::span<const double> sigma_y2);

/// Denominator used for the between-group variance in eta^2.
enum class GroupVarianceDenominator { population, sample };

/// eta^2 = V / (V + sigma2) where V is the variance of the J model-implied
/// group means (intercept, intercept + indicator_j). `beta` is T x J.
FunctionalDraws g3_eta2(const DenseMatrix& beta, std::span<const double> sigma2, std::size_t groups,
                        GroupVarianceDenominator denominator = GroupVarianceDenominator::population);

/// ICC sigma_U2 / (sigma_U2 + sigma_eps2).
FunctionalDraws g4_icc(std::span<const double> sigma_u2, std::span<const double> sigma_eps2);

/// Marginal and conditional R^2 with sigma_f2 = beta^2 var_x.
std::pair<FunctionalDraws, FunctionalDraws> g5_g6_r2(std::span<const double> beta,
                                                     std::span<const double> sigma_u2,
                                                     std::span<const double> sigma_eps2,
                                                     double var_x);

/// Sample variance with denominator n - 1.
double sample_variance(std::span<const double> values);

}  // namespace ijse
