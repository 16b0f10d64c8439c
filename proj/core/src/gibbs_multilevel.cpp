#include "ijse/gibbs_multilevel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ijse/distributions.hpp"
#include "ijse/errors.hpp"

namespace ijse {
namespace {

constexpr double kVarianceFloor = 1e-6;

void validate_prior(const MLPrior& prior) {
  if (!(prior.kappa2 > 0.0) || !(prior.tau_beta2 > 0.0) || !(prior.a_eps > 0.0) ||
      !(prior.b_eps > 0.0) || !(prior.a_u > 0.0) || !(prior.b_u > 0.0)) {
    throw DomainError("MLPrior: all hyperparameters must be positive");
  }
}

}  // namespace

void ClusteredData::validate() const {
  if (y.rows() < 2) throw std::invalid_argument("ClusteredData: need K >= 2 clusters");
  if (y.cols() < 1) throw std::invalid_argument("ClusteredData: need m >= 1 units per cluster");
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw std::invalid_argument("ClusteredData: x and y must have the same K x m shape");
  }
  if (observations() <= 2) throw std::invalid_argument("ClusteredData: need m * K > 2");
}

RandomInterceptState initial_state(const ClusteredData& data) {
  const std::size_t k_count = data.clusters();
  const std::size_t m = data.cluster_size();
  const auto n = static_cast<double>(data.observations());

  double y_sum = 0.0;
  double x_sum = 0.0;
  for (double v : data.y.values()) y_sum += v;
  for (double v : data.x.values()) x_sum += v;
  const double y_bar = y_sum / n;
  const double x_bar = x_sum / n;

  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t j = 0; j < data.y.values().size(); ++j) {
    const double dx = data.x.values()[j] - x_bar;
    sxy += dx * (data.y.values()[j] - y_bar);
    sxx += dx * dx;
  }

  RandomInterceptState state;
  state.mu = y_bar;
  state.beta = sxx > 0.0 ? sxy / sxx : 0.0;
  state.u.assign(k_count, 0.0);

  // Residual ANOVA: within-cluster and between-cluster-mean variation.
  double within = 0.0;
  double mean_of_means = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    double e_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) e_sum += data.y(k, i) - state.mu - state.beta * data.x(k, i);
    const double e_bar = e_sum / static_cast<double>(m);
    state.u[k] = e_bar;
    mean_of_means += e_bar;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = data.y(k, i) - state.mu - state.beta * data.x(k, i) - e_bar;
      within += d * d;
    }
  }
  mean_of_means /= static_cast<double>(k_count);
  double between = 0.0;
  for (double e_bar : state.u) between += (e_bar - mean_of_means) * (e_bar - mean_of_means);
  between /= static_cast<double>(k_count - 1);

  if (m > 1) {
    state.sigma_eps2 = within / (n - static_cast<double>(k_count));
    state.sigma_u2 = between - state.sigma_eps2 / static_cast<double>(m);
  } else {
    // Singleton clusters cannot separate the two components; split evenly.
    state.sigma_eps2 = 0.5 * between;
    state.sigma_u2 = 0.5 * between;
  }
  state.sigma_eps2 = std::max(state.sigma_eps2, kVarianceFloor);
  state.sigma_u2 = std::max(state.sigma_u2, kVarianceFloor);
  return state;
}

void update_random_intercepts(const ClusteredData& data, RandomInterceptState& state,
                              RandomStream& stream) {
  const std::size_t m = data.cluster_size();
  const double precision =
      static_cast<double>(m) / state.sigma_eps2 + 1.0 / state.sigma_u2;
  const double sd = std::sqrt(1.0 / precision);
  for (std::size_t k = 0; k < data.clusters(); ++k) {
    const double* y = data.y.row(k).data();
    const double* x = data.x.row(k).data();
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += y[i] - state.mu - state.beta * x[i];
    const double mean = (s / state.sigma_eps2) / precision;
    state.u[k] = mean + sd * stream.standard_normal();
  }
}

void update_grand_mean(const ClusteredData& data, const MLPrior& prior,
                       RandomInterceptState& state, RandomStream& stream) {
  const std::size_t m = data.cluster_size();
  double s = 0.0;
  for (std::size_t k = 0; k < data.clusters(); ++k) {
    const double* y = data.y.row(k).data();
    const double* x = data.x.row(k).data();
    for (std::size_t i = 0; i < m; ++i) s += y[i] - state.beta * x[i] - state.u[k];
  }
  const double precision =
      static_cast<double>(data.observations()) / state.sigma_eps2 + 1.0 / prior.kappa2;
  const double mean = (s / state.sigma_eps2) / precision;
  state.mu = mean + std::sqrt(1.0 / precision) * stream.standard_normal();
}

NormalMoments slope_conditional(const ClusteredData& data, const MLPrior& prior,
                                const RandomInterceptState& state) {
  const std::size_t m = data.cluster_size();
  double sxr = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < data.clusters(); ++k) {
    const double* y = data.y.row(k).data();
    const double* x = data.x.row(k).data();
    for (std::size_t i = 0; i < m; ++i) {
      sxr += x[i] * (y[i] - state.mu - state.u[k]);
      sxx += x[i] * x[i];
    }
  }
  const double precision = sxx / state.sigma_eps2 + 1.0 / prior.tau_beta2;
  return NormalMoments{(sxr / state.sigma_eps2) / precision, 1.0 / precision};
}

void update_slope(const ClusteredData& data, const MLPrior& prior, RandomInterceptState& state,
                  RandomStream& stream) {
  const NormalMoments moments = slope_conditional(data, prior, state);
  state.beta = moments.mean + std::sqrt(moments.variance) * stream.standard_normal();
}

double residual_sum_of_squares(const ClusteredData& data, const RandomInterceptState& state) {
  const std::size_t m = data.cluster_size();
  double rss = 0.0;
  for (std::size_t k = 0; k < data.clusters(); ++k) {
    const double* y = data.y.row(k).data();
    const double* x = data.x.row(k).data();
    for (std::size_t i = 0; i < m; ++i) {
      const double r = y[i] - state.mu - state.beta * x[i] - state.u[k];
      rss += r * r;
    }
  }
  return rss;
}

double update_residual_variance(const ClusteredData& data, const MLPrior& prior,
                                RandomInterceptState& state, RandomStream& stream) {
  const double rss = residual_sum_of_squares(data, state);
  state.sigma_eps2 = sample_inverse_gamma(
      prior.a_eps + 0.5 * static_cast<double>(data.observations()), prior.b_eps + 0.5 * rss,
      stream);
  return rss;
}

void update_intercept_variance(const MLPrior& prior, RandomInterceptState& state,
                               RandomStream& stream) {
  double ss = 0.0;
  for (double u : state.u) ss += u * u;
  state.sigma_u2 = sample_inverse_gamma(
      prior.a_u + 0.5 * static_cast<double>(state.u.size()), prior.b_u + 0.5 * ss, stream);
}

MLDraws gibbs_random_intercept(const ClusteredData& data, const MLPrior& prior, ChainLength chain,
                               RandomStream& stream) {
  data.validate();
  validate_prior(prior);
  if (chain.retained < 2) {
    throw std::invalid_argument("gibbs_random_intercept: need T >= 2 retained draws");
  }
  const std::size_t k_count = data.clusters();
  const std::size_t t_count = chain.retained;

  MLDraws out;
  out.mu.resize(t_count);
  out.beta.resize(t_count);
  out.sigma_eps2.resize(t_count);
  out.sigma_u2.resize(t_count);
  out.u = DenseMatrix(t_count, k_count);

  RandomInterceptState state = initial_state(data);
  const std::size_t total = chain.burn_in + t_count;
  for (std::size_t it = 0; it < total; ++it) {
    update_random_intercepts(data, state, stream);
    update_grand_mean(data, prior, state, stream);
    update_slope(data, prior, state, stream);
    [[maybe_unused]] const double rss = update_residual_variance(data, prior, state, stream);
    update_intercept_variance(prior, state, stream);
    assert(rss == residual_sum_of_squares(data, state));

    if (it >= chain.burn_in) {
      const std::size_t t = it - chain.burn_in;
      out.mu[t] = state.mu;
      out.beta[t] = state.beta;
      out.sigma_eps2[t] = state.sigma_eps2;
      out.sigma_u2[t] = state.sigma_u2;
      std::copy(state.u.begin(), state.u.end(), out.u.row(t).begin());
    }
  }
  return out;
}

LogLikMatrix cluster_loglik_matrix(const ClusteredData& data, const MLDraws& draws) {
  data.validate();
  const std::size_t k_count = data.clusters();
  const std::size_t m = data.cluster_size();
  const std::size_t t_count = draws.draws();
  if (draws.beta.size() != t_count || draws.sigma_eps2.size() != t_count ||
      draws.sigma_u2.size() != t_count || draws.u.rows() != t_count || draws.u.cols() != k_count) {
    throw std::invalid_argument("cluster_loglik_matrix: draws do not match the data (K = " +
                                std::to_string(k_count) + ")");
  }

  std::vector<double> sd_eps(t_count);
  std::vector<double> sd_u(t_count);
  std::vector<double> offset_eps(t_count);
  std::vector<double> offset_u(t_count);
  for (std::size_t t = 0; t < t_count; ++t) {
    if (!(draws.sigma_eps2[t] > 0.0) || !(draws.sigma_u2[t] > 0.0)) {
      throw DataError("cluster_loglik_matrix: non-positive variance draw at t = " +
                      std::to_string(t));
    }
    sd_eps[t] = std::sqrt(draws.sigma_eps2[t]);
    sd_u[t] = std::sqrt(draws.sigma_u2[t]);
    offset_eps[t] = kLogInvSqrt2Pi - std::log(sd_eps[t]);
    offset_u[t] = kLogInvSqrt2Pi - std::log(sd_u[t]);
  }

  DenseMatrix values(k_count, t_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double* y = data.y.row(k).data();
    const double* x = data.x.row(k).data();
    double* dst = values.row(k).data();
    for (std::size_t t = 0; t < t_count; ++t) {
      const double u = draws.u(t, k);
      const double zu = u / sd_u[t];
      double total = offset_u[t] - 0.5 * zu * zu;
      for (std::size_t i = 0; i < m; ++i) {
        const double z = (y[i] - (draws.mu[t] + draws.beta[t] * x[i] + u)) / sd_eps[t];
        total += offset_eps[t] - 0.5 * z * z;
      }
      dst[t] = total;
    }
  }
  return LogLikMatrix(std::move(values), UnitKind::cluster);
}

}  // namespace ijse
