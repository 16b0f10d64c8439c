#include "ijse/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ijse/errors.hpp"

namespace ijse {
namespace {

void require_same_length(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw std::invalid_argument(std::string(what) + ": draw vectors have different lengths");
  }
}

void require_positive_draw(double value, std::size_t t, const char* what) {
  if (!(value > 0.0)) {
    throw DataError(std::string(what) + ": non-positive variance draw at t = " +
                    std::to_string(t));
  }
}

}  // namespace

std::string_view to_string(FunctionalId id) {
  switch (id) {
    case FunctionalId::g1: return "g1";
    case FunctionalId::g2: return "g2";
    case FunctionalId::g3: return "g3";
    case FunctionalId::g4: return "g4";
    case FunctionalId::g5: return "g5";
    case FunctionalId::g6: return "g6";
    case FunctionalId::external: return "g";
  }
  return "g";
}

FunctionalId parse_functional_id(std::string_view text) {
  for (auto id : {FunctionalId::g1, FunctionalId::g2, FunctionalId::g3, FunctionalId::g4,
                  FunctionalId::g5, FunctionalId::g6}) {
    if (text == to_string(id)) return id;
  }
  throw std::invalid_argument("unknown functional '" + std::string(text) + "'");
}

FunctionalDraws g1_indirect(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "g1_indirect");
  FunctionalDraws out{FunctionalId::g1, std::vector<double>(a.size())};
  for (std::size_t t = 0; t < a.size(); ++t) out.values[t] = a[t] * b[t];
  return out;
}

FunctionalDraws g2_std_indirect(std::span<const double> a, std::span<const double> b,
                                std::span<const double> c_prime,
                                std::span<const double> sigma_m2,
                                std::span<const double> sigma_y2) {
  const std::size_t n = a.size();
  require_same_length(n, b.size(), "g2_std_indirect");
  require_same_length(n, c_prime.size(), "g2_std_indirect");
  require_same_length(n, sigma_m2.size(), "g2_std_indirect");
  require_same_length(n, sigma_y2.size(), "g2_std_indirect");
  FunctionalDraws out{FunctionalId::g2, std::vector<double>(n)};
  for (std::size_t t = 0; t < n; ++t) {
    require_positive_draw(sigma_m2[t], t, "g2_std_indirect");
    require_positive_draw(sigma_y2[t], t, "g2_std_indirect");
    const double ab = a[t] * b[t];
    const double total = c_prime[t] + ab;
    const double var_y = total * total + b[t] * b[t] * sigma_m2[t] + sigma_y2[t];
    out.values[t] = ab / std::sqrt(var_y);
  }
  return out;
}

FunctionalDraws g3_eta2(const DenseMatrix& beta, std::span<const double> sigma2, std::size_t groups,
                        GroupVarianceDenominator denominator) {
  if (groups < 2) throw std::invalid_argument("g3_eta2: need J >= 2 groups");
  if (beta.cols() != groups) {
    throw std::invalid_argument("g3_eta2: beta must have J columns (intercept + J-1 indicators)");
  }
  require_same_length(beta.rows(), sigma2.size(), "g3_eta2");
  const double divisor = denominator == GroupVarianceDenominator::population
                             ? static_cast<double>(groups)
                             : static_cast<double>(groups - 1);
  std::vector<double> means(groups);
  FunctionalDraws out{FunctionalId::g3, std::vector<double>(beta.rows())};
  for (std::size_t t = 0; t < beta.rows(); ++t) {
    require_positive_draw(sigma2[t], t, "g3_eta2");
    const auto row = beta.row(t);
    double sum = 0.0;
    for (std::size_t j = 0; j < groups; ++j) {
      means[j] = j == 0 ? row[0] : row[0] + row[j];
      sum += means[j];
    }
    const double grand = sum / static_cast<double>(groups);
    double ss = 0.0;
    for (double mu : means) ss += (mu - grand) * (mu - grand);
    const double between = ss / divisor;
    out.values[t] = between / (between + sigma2[t]);
  }
  return out;
}

FunctionalDraws g4_icc(std::span<const double> sigma_u2, std::span<const double> sigma_eps2) {
  require_same_length(sigma_u2.size(), sigma_eps2.size(), "g4_icc");
  FunctionalDraws out{FunctionalId::g4, std::vector<double>(sigma_u2.size())};
  for (std::size_t t = 0; t < sigma_u2.size(); ++t) {
    require_positive_draw(sigma_u2[t], t, "g4_icc");
    require_positive_draw(sigma_eps2[t], t, "g4_icc");
    out.values[t] = sigma_u2[t] / (sigma_u2[t] + sigma_eps2[t]);
  }
  return out;
}

std::pair<FunctionalDraws, FunctionalDraws> g5_g6_r2(std::span<const double> beta,
                                                     std::span<const double> sigma_u2,
                                                     std::span<const double> sigma_eps2,
                                                     double var_x) {
  const std::size_t n = beta.size();
  require_same_length(n, sigma_u2.size(), "g5_g6_r2");
  require_same_length(n, sigma_eps2.size(), "g5_g6_r2");
  if (!(var_x > 0.0)) throw DomainError("g5_g6_r2: var_x must be positive");
  FunctionalDraws marginal{FunctionalId::g5, std::vector<double>(n)};
  FunctionalDraws conditional{FunctionalId::g6, std::vector<double>(n)};
  for (std::size_t t = 0; t < n; ++t) {
    require_positive_draw(sigma_u2[t], t, "g5_g6_r2");
    require_positive_draw(sigma_eps2[t], t, "g5_g6_r2");
    const double fixed = beta[t] * beta[t] * var_x;
    const double total = fixed + sigma_u2[t] + sigma_eps2[t];
    marginal.values[t] = fixed / total;
    conditional.values[t] = (fixed + sigma_u2[t]) / total;
  }
  return {std::move(marginal), std::move(conditional)};
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 values");
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  long double ss = 0.0L;
  for (double v : values) ss += (v - mean) * (v - mean);
  return static_cast<double>(ss / static_cast<long double>(values.size() - 1));
}

}  // namespace ijse
