#include "ijse/dgp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ijse/distributions.hpp"
#include "ijse/errors.hpp"

namespace ijse {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double t_standardizer(double nu) {
  if (!(nu > 2.0)) {
    throw DomainError("degrees of freedom must exceed 2 for unit-variance t, got " +
                      std::to_string(nu));
  }
  return std::sqrt((nu - 2.0) / nu);
}

}  // namespace

std::string_view to_string(DgpSpec spec) {
  return spec == DgpSpec::correct ? "correct" : "misspec";
}

DgpSpec parse_dgp_spec(std::string_view text) {
  if (text == "correct") return DgpSpec::correct;
  if (text == "misspec" || text == "misspecified") return DgpSpec::misspecified;
  throw std::invalid_argument("unknown DGP '" + std::string(text) +
                              "' (expected correct or misspec)");
}

MediationParams MediationParams::correct_defaults() { return MediationParams{}; }

MediationParams MediationParams::misspecified_defaults() {
  MediationParams p;
  p.a = 0.5;
  p.b = 0.5;
  return p;
}

MediationParams MediationParams::defaults_for(DgpSpec spec) {
  return spec == DgpSpec::correct ? correct_defaults() : misspecified_defaults();
}

MediationData gen_mediation(RandomStream& stream, std::size_t n, DgpSpec spec,
                            const MediationParams& params) {
  if (n < 1) throw std::invalid_argument("gen_mediation: need N >= 1");
  MediationData data{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};

  if (spec == DgpSpec::correct) {
    if (!(params.sigma_m2 >= 0.0) || !(params.sigma_y2 >= 0.0)) {
      throw DomainError("gen_mediation: error variances must be non-negative");
    }
    const double sd_m = std::sqrt(params.sigma_m2);
    const double sd_y = std::sqrt(params.sigma_y2);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = stream.standard_normal();
      const double m = params.alpha0 + params.a * x + sample_normal(0.0, sd_m, stream);
      const double y = params.beta0 + params.c_prime * x + params.b * m +
                       sample_normal(0.0, sd_y, stream);
      data.x[i] = x;
      data.m[i] = m;
      data.y[i] = y;
    }
    return data;
  }

  const double standardizer = t_standardizer(params.nu);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = stream.standard_normal();
    const double eps_m = sample_laplace(std::exp(params.kappa_m * std::abs(x)) * kInvSqrt2, stream);
    const double m = params.alpha0 + params.a * x + eps_m;
    const double eps_y =
        std::exp(params.kappa_y * std::abs(m)) * sample_student_t(params.nu, stream) * standardizer;
    data.x[i] = x;
    data.m[i] = m;
    data.y[i] = params.beta0 + params.c_prime * x + params.b * m + eps_y;
  }
  return data;
}

std::vector<double> anova_group_means(const AnovaParams& params) {
  if (params.groups < 2) throw std::invalid_argument("AnovaParams: need J >= 2 groups");
  const double centre = 0.5 * static_cast<double>(params.groups + 1);
  std::vector<double> means(params.groups);
  for (std::size_t j = 0; j < params.groups; ++j) {
    means[j] = params.delta * (static_cast<double>(j + 1) - centre);
  }
  return means;
}

AnovaData gen_anova(RandomStream& stream, std::size_t n, const AnovaParams& params) {
  const std::vector<double> means = anova_group_means(params);
  const std::size_t groups = params.groups;
  if (n == 0 || n % groups != 0) {
    throw std::invalid_argument("gen_anova: N = " + std::to_string(n) +
                                " is not divisible by J = " + std::to_string(groups));
  }
  const std::size_t per_group = n / groups;
  const double standardizer = t_standardizer(3.0);

  AnovaData data;
  data.y.reserve(n);
  data.group.reserve(n);
  for (std::size_t j = 0; j < groups; ++j) {
    const double scale = std::exp(params.gamma * std::abs(means[j])) * standardizer;
    for (std::size_t i = 0; i < per_group; ++i) {
      data.y.push_back(means[j] + scale * sample_student_t(3.0, stream));
      data.group.push_back(static_cast<int>(j + 1));
    }
  }
  return data;
}

RegressionData anova_design(const AnovaData& data, std::size_t groups) {
  const std::size_t n = data.y.size();
  if (data.group.size() != n) throw std::invalid_argument("anova_design: length mismatch");
  RegressionData reg{data.y, DenseMatrix(n, groups)};
  for (std::size_t i = 0; i < n; ++i) {
    const int g = data.group[i];
    if (g < 1 || static_cast<std::size_t>(g) > groups) {
      throw std::invalid_argument("anova_design: group label out of range");
    }
    reg.X(i, 0) = 1.0;
    if (g > 1) reg.X(i, static_cast<std::size_t>(g - 1)) = 1.0;
  }
  return reg;
}

ClusteredData gen_multilevel(RandomStream& stream, std::size_t clusters,
                             const MultilevelParams& params) {
  if (clusters < 2) throw std::invalid_argument("gen_multilevel: need K >= 2 clusters");
  if (params.cluster_size < 1) throw std::invalid_argument("gen_multilevel: need m >= 1");
  if (!(params.sigma_u2 >= 0.0) || !(params.sigma_eps2 >= 0.0)) {
    throw DomainError("gen_multilevel: variance components must be non-negative");
  }
  const double standardizer = t_standardizer(params.nu);
  const double sd_u = std::sqrt(params.sigma_u2);
  const double sd_eps = std::sqrt(params.sigma_eps2);
  const std::size_t m = params.cluster_size;

  ClusteredData data{DenseMatrix(clusters, m), DenseMatrix(clusters, m)};
  for (std::size_t k = 0; k < clusters; ++k) {
    const double u = sd_u * standardizer * sample_student_t(params.nu, stream);
    const double scale = sd_eps * std::exp(params.lambda * std::abs(u)) * kInvSqrt2;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = stream.standard_normal();
      const double eps = scale * sample_laplace(1.0, stream);
      data.x(k, i) = x;
      data.y(k, i) = params.mu + params.beta * x + u + eps;
    }
  }
  return data;
}

}  // namespace ijse
