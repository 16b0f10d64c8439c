#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "ijse/gibbs_multilevel.hpp"
#include "ijse/gibbs_regression.hpp"
#include "ijse/random.hpp"

namespace ijse {

enum class DgpSpec { correct, misspecified };

std::string_view to_string(DgpSpec spec);
DgpSpec parse_dgp_spec(std::string_view text);

struct MediationParams {
  double a = 0.3;
  double b = 0.3;
  double c_prime = 0.0;
  double alpha0 = 0.0;
  double beta0 = 0.0;
  double sigma_m2 = 1.0;  // correct specification only
  double sigma_y2 = 1.0;  // correct specification only
  double nu = 3.0;        // misspecification only, must exceed 2
  double kappa_m = 0.45;
  double kappa_y = 0.30;

  /// a = b = 0.3, unit Gaussian errors.
  static MediationParams correct_defaults();
  /// a = b = 0.5, nu = 3, kappa_M = 0.45, kappa_Y = 0.30.
  static MediationParams misspecified_defaults();
  static MediationParams defaults_for(DgpSpec spec);
};

/// X ~ N(0,1); M = alpha0 + a X + eps_M; Y = beta0 + c' X + b M + eps_Y.
/// Correct: Gaussian errors. Misspecified: eps_M ~ Laplace(0, e^{kappa_M |x|}/sqrt 2)
/// and eps_Y = e^{kappa_Y |m|} t_nu sqrt((nu-2)/nu).
MediationData gen_mediation(RandomStream& stream, std::size_t n, DgpSpec spec,
                            const MediationParams& params);

struct AnovaParams {
  std::size_t groups = 5;
  double delta = 0.4;
  double gamma = 0.35;
};

struct AnovaData {
  std::vector<double> y;
  std::vector<int> group;  // labels 1..J, emitted in blocks
};

/// mu_j = delta (j - (J+1)/2), j = 1..J.
std::vector<double> anova_group_means(const AnovaParams& params);

/// Exactly N/J observations per group, errors s_j t_3 with
/// s_j = e^{gamma |mu_j|} sqrt(1/3). Throws std::invalid_argument if J does not divide N.
AnovaData gen_anova(RandomStream& stream, std::size_t n, const AnovaParams& params);

/// Working-model design: intercept plus indicators for groups 2..J.
RegressionData anova_design(const AnovaData& data, std::size_t groups);

struct MultilevelParams {
  double mu = 0.0;
  double beta = 0.5;
  double sigma_u2 = 0.30;
  double sigma_eps2 = 1.70;
  double lambda = 0.25;
  double nu = 3.0;
  std::size_t cluster_size = 5;
};

/// x_ik ~ N(0,1); U_k = sigma_U sqrt((nu-2)/nu) t_nu;
/// eps_ik = sigma_eps e^{lambda |U_k|} l_ik / sqrt 2 with l ~ Laplace(0,1).
ClusteredData gen_multilevel(RandomStream& stream, std::size_t clusters,
                             const MultilevelParams& params);

}  // namespace ijse
