#include "ijse/gibbs_regression.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ijse/distributions.hpp"
#include "ijse/errors.hpp"

namespace ijse {
namespace {

SmallMatrix cross_product(const DenseMatrix& X) {
  const std::size_t p = X.cols();
  SmallMatrix xtx(p);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto row = X.row(i);
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) xtx(a, b) += row[a] * row[b];
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < a; ++b) xtx(a, b) = xtx(b, a);
  return xtx;
}

double residual_sum_of_squares(const RegressionData& data, std::span<const double> beta) {
  const std::size_t p = data.predictors();
  double rss = 0.0;
  for (std::size_t i = 0; i < data.observations(); ++i) {
    const double* row = data.X.row(i).data();
    double fitted = 0.0;
    for (std::size_t j = 0; j < p; ++j) fitted += row[j] * beta[j];
    const double r = data.y[i] - fitted;
    rss += r * r;
  }
  return rss;
}

// out(i, t) (+)= log N(y_i; x_i^T beta^(t), sigma2^(t)), bit-identical to normal_logpdf.
void write_regression_loglik(const RegressionData& data, const RegressionDraws& draws,
                             DenseMatrix& out, bool accumulate) {
  const std::size_t n = data.observations();
  const std::size_t p = data.predictors();
  const std::size_t t_count = draws.draws();
  if (draws.beta.rows() != t_count || draws.beta.cols() != p) {
    throw std::invalid_argument("loglik_matrix_regression: draws do not match the design (p = " +
                                std::to_string(p) + ")");
  }
  std::vector<double> sigma(t_count);
  std::vector<double> offset(t_count);
  for (std::size_t t = 0; t < t_count; ++t) {
    if (!(draws.sigma2[t] > 0.0)) {
      throw DataError("loglik_matrix_regression: non-positive sigma2 draw at t = " +
                      std::to_string(t));
    }
    sigma[t] = std::sqrt(draws.sigma2[t]);
    offset[t] = kLogInvSqrt2Pi - std::log(sigma[t]);
  }
  const double* beta = draws.beta.values().data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = data.X.row(i).data();
    const double y = data.y[i];
    double* dst = out.row(i).data();
    for (std::size_t t = 0; t < t_count; ++t) {
      const double* b = beta + t * p;
      double mu = 0.0;
      for (std::size_t j = 0; j < p; ++j) mu += x[j] * b[j];
      const double z = (y - mu) / sigma[t];
      const double value = offset[t] - 0.5 * z * z;
      dst[t] = accumulate ? dst[t] + value : value;
    }
  }
}

}  // namespace

void RegressionData::validate() const {
  const std::size_t n = y.size();
  const std::size_t p = X.cols();
  if (X.rows() != n) {
    throw std::invalid_argument("RegressionData: y has " + std::to_string(n) +
                                " entries but X has " + std::to_string(X.rows()) + " rows");
  }
  if (p < 1 || p > SmallMatrix::kMaxDim) {
    throw std::invalid_argument("RegressionData: predictor count must be in [1, 8]");
  }
  if (n <= p) throw std::invalid_argument("RegressionData: need N > p observations");

  // Full column rank: Cholesky of X^T X scaled to unit diagonal.
  SmallMatrix scaled = cross_product(X);
  std::vector<double> inv_sd(p);
  for (std::size_t j = 0; j < p; ++j) {
    if (!(scaled(j, j) > 0.0)) throw DecompositionError(j, scaled(j, j));
    inv_sd[j] = 1.0 / std::sqrt(scaled(j, j));
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < p; ++b) scaled(a, b) *= inv_sd[a] * inv_sd[b];
  (void)chol_factor(scaled);
}

ConjugateMoments conjugate_moments(const RegressionData& data, const NIGPrior& prior) {
  if (!(prior.tau2 > 0.0) || !(prior.a0 > 0.0) || !(prior.b0 > 0.0)) {
    throw DomainError("NIGPrior: tau2, a0 and b0 must be positive");
  }
  const std::size_t p = data.predictors();
  SmallMatrix precision = cross_product(data.X);
  for (std::size_t j = 0; j < p; ++j) precision(j, j) += 1.0 / prior.tau2;

  std::vector<double> xty(p, 0.0);
  for (std::size_t i = 0; i < data.observations(); ++i) {
    const auto row = data.X.row(i);
    for (std::size_t j = 0; j < p; ++j) xty[j] += row[j] * data.y[i];
  }
  const SmallMatrix lower = chol_factor(precision);
  return ConjugateMoments{precision, chol_inverse(lower), chol_solve(lower, xty)};
}

RegressionDraws gibbs_linreg(const RegressionData& data, const NIGPrior& prior, ChainLength chain,
                             RandomStream& stream) {
  if (chain.retained < 2) throw std::invalid_argument("gibbs_linreg: need T >= 2 retained draws");
  data.validate();
  const std::size_t n = data.observations();
  const std::size_t p = data.predictors();

  const ConjugateMoments moments = conjugate_moments(data, prior);
  const SmallMatrix cov_factor = chol_factor(moments.covariance);

  // beta^(0) is the ridge solution; sigma2^(0) is redrawn from it by the first sweep.
  std::vector<double> beta = moments.mean;
  double sigma2 = residual_sum_of_squares(data, beta) / static_cast<double>(n - p);

  const double shape = prior.a0 + 0.5 * static_cast<double>(n + p);
  const double inv_two_tau2 = 0.5 / prior.tau2;

  RegressionDraws out{DenseMatrix(chain.retained, p), std::vector<double>(chain.retained)};
  const std::size_t total = chain.burn_in + chain.retained;
  for (std::size_t it = 0; it < total; ++it) {
    double beta_sq = 0.0;
    for (double b : beta) beta_sq += b * b;
    const double rate =
        prior.b0 + 0.5 * residual_sum_of_squares(data, beta) + inv_two_tau2 * beta_sq;
    sigma2 = sample_inverse_gamma(shape, rate, stream);
    draw_mvnormal_factored(moments.mean, cov_factor, std::sqrt(sigma2), stream, beta);

    if (it >= chain.burn_in) {
      const std::size_t t = it - chain.burn_in;
      out.sigma2[t] = sigma2;
      auto row = out.beta.row(t);
      for (std::size_t j = 0; j < p; ++j) row[j] = beta[j];
    }
  }
  return out;
}

LogLikMatrix loglik_matrix_regression(const RegressionData& data, const RegressionDraws& draws) {
  DenseMatrix values(data.observations(), draws.draws());
  write_regression_loglik(data, draws, values, false);
  return LogLikMatrix(std::move(values), UnitKind::observation);
}

RegressionData mediator_regression(const MediationData& data) {
  const std::size_t n = data.size();
  if (data.m.size() != n || data.y.size() != n) {
    throw std::invalid_argument("MediationData: x, m and y must have equal length");
  }
  RegressionData reg{data.m, DenseMatrix(n, 2)};
  for (std::size_t i = 0; i < n; ++i) {
    reg.X(i, 0) = 1.0;
    reg.X(i, 1) = data.x[i];
  }
  return reg;
}

RegressionData outcome_regression(const MediationData& data) {
  const std::size_t n = data.size();
  if (data.m.size() != n || data.y.size() != n) {
    throw std::invalid_argument("MediationData: x, m and y must have equal length");
  }
  RegressionData reg{data.y, DenseMatrix(n, 3)};
  for (std::size_t i = 0; i < n; ++i) {
    reg.X(i, 0) = 1.0;
    reg.X(i, 1) = data.x[i];
    reg.X(i, 2) = data.m[i];
  }
  return reg;
}

MediationDraws fit_mediation_models(const MediationData& data, const NIGPrior& prior,
                                    ChainLength chain, const RandomStream& stream) {
  RandomStream mediator_stream = stream.substream(StreamPurpose::mediator_chain);
  RandomStream outcome_stream = stream.substream(StreamPurpose::outcome_chain);
  return MediationDraws{
      gibbs_linreg(mediator_regression(data), prior, chain, mediator_stream),
      gibbs_linreg(outcome_regression(data), prior, chain, outcome_stream)};
}

LogLikMatrix mediation_loglik(const MediationData& data, const MediationDraws& draws) {
  if (draws.mediator.draws() != draws.outcome.draws()) {
    throw std::invalid_argument("mediation_loglik: stage draw counts differ");
  }
  DenseMatrix values(data.size(), draws.mediator.draws());
  write_regression_loglik(mediator_regression(data), draws.mediator, values, false);
  write_regression_loglik(outcome_regression(data), draws.outcome, values, true);
  return LogLikMatrix(std::move(values), UnitKind::observation);
}

MediationFit mediation_fit(const MediationData& data, const NIGPrior& prior, ChainLength chain,
                           const RandomStream& stream) {
  MediationDraws draws = fit_mediation_models(data, prior, chain, stream);
  LogLikMatrix loglik = mediation_loglik(data, draws);
  return MediationFit{std::move(draws), std::move(loglik)};
}

}  // namespace ijse
