#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ijse/dense_matrix.hpp"
#include "ijse/loglik_matrix.hpp"
#include "ijse/random.hpp"
#include "ijse/small_matrix.hpp"

namespace ijse {

struct ChainLength {
  std::size_t retained = 3000;
  std::size_t burn_in = 500;
};

inline constexpr ChainLength kDefaultChain{3000, 500};
inline constexpr ChainLength kDefaultBootstrapChain{800, 200};

/// Response y (N) and design X (N x p).
struct RegressionData {
  std::vector<double> y;
  DenseMatrix X;

  std::size_t observations() const noexcept { return y.size(); }
  std::size_t predictors() const noexcept { return X.cols(); }

  /// Throws std::invalid_argument on shape problems (N <= p, p > 8, length
  /// mismatch) and DecompositionError when X lacks full column rank.
  void validate() const;
};

/// beta | sigma2 ~ N(0, tau2 sigma2 I), sigma2 ~ IG(a0, b0).
struct NIGPrior {
  double tau2 = 1e6;
  double a0 = 1e-2;
  double b0 = 1e-2;
};

struct RegressionDraws {
  DenseMatrix beta;            // T x p
  std::vector<double> sigma2;  // T

  std::size_t draws() const noexcept { return sigma2.size(); }
};

/// V_n = (X^T X + tau^-2 I)^-1 and m_n = V_n X^T y.
struct ConjugateMoments {
  SmallMatrix precision;  // X^T X + tau^-2 I
  SmallMatrix covariance;  // V_n
  std::vector<double> mean;  // m_n
};

ConjugateMoments conjugate_moments(const RegressionData& data, const NIGPrior& prior);

/// Two-block Gibbs sampler for the conjugate normal/inverse-gamma linear
/// regression. Starts from beta = m_n and sigma2 = RSS/(N - p), then
/// alternates the sigma2 and beta full conditionals.
RegressionDraws gibbs_linreg(const RegressionData& data, const NIGPrior& prior, ChainLength chain,
                             RandomStream& stream);

/// Entry (i, t) = log N(y_i; x_i^T beta^(t), sigma2^(t)).
LogLikMatrix loglik_matrix_regression(const RegressionData& data, const RegressionDraws& draws);

// ---------------------------------------------------------------------------
// Two-stage linear mediation: M ~ [1, x], Y ~ [1, x, m].

struct MediationData {
  std::vector<double> x;
  std::vector<double> m;
  std::vector<double> y;

  std::size_t size() const noexcept { return x.size(); }
};

RegressionData mediator_regression(const MediationData& data);
RegressionData outcome_regression(const MediationData& data);

struct MediationDraws {
  RegressionDraws mediator;  // beta = (alpha0, a)
  RegressionDraws outcome;   // beta = (beta0, c', b)
};

/// Fits both stages with independent substreams of `stream`.
MediationDraws fit_mediation_models(const MediationData& data, const NIGPrior& prior,
                                    ChainLength chain, const RandomStream& stream);

/// Combined per-observation log-likelihood of both stages.
LogLikMatrix mediation_loglik(const MediationData& data, const MediationDraws& draws);

struct MediationFit {
  MediationDraws draws;
  LogLikMatrix loglik;
};

MediationFit mediation_fit(const MediationData& data, const NIGPrior& prior, ChainLength chain,
                           const RandomStream& stream);

}  // namespace ijse
