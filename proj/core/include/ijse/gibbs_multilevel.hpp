#pragma once

#include <cstddef>
#include <vector>

#include "ijse/dense_matrix.hpp"
#include "ijse/gibbs_regression.hpp"
#include "ijse/loglik_matrix.hpp"
#include "ijse/random.hpp"

namespace ijse {

/// Balanced clustered data: K clusters (rows) of m units (columns).
struct ClusteredData {
  DenseMatrix y;  // K x m
  DenseMatrix x;  // K x m

  std::size_t clusters() const noexcept { return y.rows(); }
  std::size_t cluster_size() const noexcept { return y.cols(); }
  std::size_t observations() const noexcept { return y.rows() * y.cols(); }

  void validate() const;
};

/// mu ~ N(0, kappa2), beta ~ N(0, tau_beta2), sigma_eps2 ~ IG(a_eps, b_eps),
/// sigma_u2 ~ IG(a_u, b_u).
struct MLPrior {
  double kappa2 = 1e6;
  double tau_beta2 = 1e6;
  double a_eps = 1e-2;
  double b_eps = 1e-2;
  double a_u = 1e-2;
  double b_u = 1e-2;
};

struct MLDraws {
  std::vector<double> mu;
  std::vector<double> beta;
  std::vector<double> sigma_eps2;
  std::vector<double> sigma_u2;
  DenseMatrix u;  // T x K random-intercept draws

  std::size_t draws() const noexcept { return mu.size(); }
};

/// Current state of the random-intercept chain.
struct RandomInterceptState {
  double mu = 0.0;
  double beta = 0.0;
  double sigma_eps2 = 1.0;
  double sigma_u2 = 1.0;
  std::vector<double> u;
};

struct NormalMoments {
  double mean = 0.0;
  double variance = 1.0;
};

/// Grand mean, pooled OLS slope, cluster mean residuals, and ANOVA variance
/// components of the residuals floored at 1e-6.
RandomInterceptState initial_state(const ClusteredData& data);

// The five conditional blocks, in sweep order.
void update_random_intercepts(const ClusteredData& data, RandomInterceptState& state,
                              RandomStream& stream);
void update_grand_mean(const ClusteredData& data, const MLPrior& prior,
                       RandomInterceptState& state, RandomStream& stream);
void update_slope(const ClusteredData& data, const MLPrior& prior, RandomInterceptState& state,
                  RandomStream& stream);
/// Returns the residual sum of squares the draw was conditioned on.
double update_residual_variance(const ClusteredData& data, const MLPrior& prior,
                                RandomInterceptState& state, RandomStream& stream);
void update_intercept_variance(const MLPrior& prior, RandomInterceptState& state,
                               RandomStream& stream);

/// Full conditional of beta given (mu, U, sigma_eps2).
NormalMoments slope_conditional(const ClusteredData& data, const MLPrior& prior,
                                const RandomInterceptState& state);

/// sum_k sum_i (Y_ik - mu - beta x_ik - U_k)^2 at the given state.
double residual_sum_of_squares(const ClusteredData& data, const RandomInterceptState& state);

/// Five-block Gibbs sampler for Y_ik = mu + beta x_ik + U_k + eps_ik.
/// Sweep order: U, mu, beta, sigma_eps2, sigma_u2.
MLDraws gibbs_random_intercept(const ClusteredData& data, const MLPrior& prior, ChainLength chain,
                               RandomStream& stream);

/// Entry (k, t) = log N(U_k; 0, sigma_u2) + sum_i log N(Y_ik; mu + beta x_ik + U_k, sigma_eps2).
LogLikMatrix cluster_loglik_matrix(const ClusteredData& data, const MLDraws& draws);

}  // namespace ijse
