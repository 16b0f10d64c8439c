#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ijse/distributions.hpp"
#include "ijse/dgp.hpp"
#include "ijse/errors.hpp"
#include "ijse/functionals.hpp"
#include "ijse/gibbs_multilevel.hpp"
#include "oracles.hpp"

namespace {

using namespace ijse;

// Data from the Gaussian working model itself.
ClusteredData gaussian_data(std::size_t K, std::size_t m, double mu, double beta, double su2,
                            double se2, std::uint64_t seed) {
  RandomStream s(seed);
  ClusteredData d{DenseMatrix(K, m), DenseMatrix(K, m)};
  for (std::size_t k = 0; k < K; ++k) {
    const double u = std::sqrt(su2) * s.standard_normal();
    for (std::size_t i = 0; i < m; ++i) {
      d.x(k, i) = s.standard_normal();
      d.y(k, i) = mu + beta * d.x(k, i) + u + std::sqrt(se2) * s.standard_normal();
    }
  }
  return d;
}

TEST(RandomIntercept, SlopeBlockMatchesConditional) {
  const ClusteredData data = gaussian_data(30, 5, 0.2, 0.5, 0.3, 1.7, 61);
  RandomInterceptState state = initial_state(data);
  state.mu = 0.1;
  state.sigma_eps2 = 1.4;
  // Test-side evaluation of the printed conditional.
  double sxr = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < 30; ++k)
    for (std::size_t i = 0; i < 5; ++i) {
      sxr += data.x(k, i) * (data.y(k, i) - state.mu - state.u[k]);
      sxx += data.x(k, i) * data.x(k, i);
    }
  const MLPrior prior;
  const double precision = sxx / state.sigma_eps2 + 1.0 / prior.tau_beta2;
  const double mean = sxr / state.sigma_eps2 / precision;
  const double var = 1.0 / precision;

  RandomStream s(62);
  const int n = 100000;
  std::vector<double> draws(n);
  for (auto& b : draws) {
    update_slope(data, prior, state, s);
    b = state.beta;
  }
  EXPECT_NEAR(oracle::mean(draws), mean, 3.0 * std::sqrt(var / n));
  EXPECT_NEAR(oracle::variance(draws), var, 3.0 * var * std::sqrt(2.0 / (n - 1)));
}

TEST(RandomIntercept, IccSymmetryOnWorkingModelData) {
  const ClusteredData data = gaussian_data(400, 5, 0.0, 0.5, 1.0, 1.0, 63);
  RandomStream s(64);
  const MLDraws draws = gibbs_random_intercept(data, MLPrior{}, kDefaultChain, s);
  const auto rho = g4_icc(draws.sigma_u2, draws.sigma_eps2).values;
  // Sampling error dominates Monte Carlo error here, so the band is the posterior SD.
  const double post_sd = std::sqrt(oracle::variance(rho));
  EXPECT_NEAR(oracle::mean(rho), 0.5, 3.0 * post_sd);
}

TEST(RandomIntercept, SlopeMatchesGls) {
  const ClusteredData data = gaussian_data(120, 5, 0.0, 0.5, 0.3, 1.7, 65);
  RandomStream s(66);
  const MLDraws draws = gibbs_random_intercept(data, MLPrior{}, kDefaultChain, s);
  const double su2 = oracle::mean(draws.sigma_u2);
  const double se2 = oracle::mean(draws.sigma_eps2);
  const double beta_gls = oracle::random_intercept_gls(data, su2, se2)[1];
  EXPECT_NEAR(oracle::mean(draws.beta), beta_gls, 3.0 * oracle::batch_means_se(draws.beta));
}

TEST(RandomIntercept, ShapeAndPositiveVariances) {
  RandomStream ds(67);
  const ClusteredData data = gen_multilevel(ds, 20, MultilevelParams{});
  RandomStream s(68);
  const MLDraws draws = gibbs_random_intercept(data, MLPrior{}, ChainLength{300, 100}, s);
  EXPECT_EQ(draws.draws(), 300u);
  EXPECT_EQ(draws.u.rows(), 300u);
  EXPECT_EQ(draws.u.cols(), 20u);
  for (std::size_t t = 0; t < 300; ++t) {
    EXPECT_GT(draws.sigma_eps2[t], 0.0);
    EXPECT_GT(draws.sigma_u2[t], 0.0);
  }
}

TEST(RandomIntercept, ResidualIdentityAfterSweep) {
  const ClusteredData data = gaussian_data(10, 4, 0.0, 0.5, 0.3, 1.0, 69);
  RandomInterceptState state = initial_state(data);
  RandomStream s(70);
  const MLPrior prior;
  update_random_intercepts(data, state, s);
  update_grand_mean(data, prior, state, s);
  update_slope(data, prior, state, s);
  const double used = update_residual_variance(data, prior, state, s);
  update_intercept_variance(prior, state, s);
  EXPECT_EQ(used, residual_sum_of_squares(data, state));
}

TEST(RandomIntercept, InitialStateFloorsVariances) {
  ClusteredData data{DenseMatrix(3, 2, 1.0), DenseMatrix(3, 2)};
  data.x(0, 0) = 1.0;
  data.x(1, 1) = -1.0;
  const RandomInterceptState st = initial_state(data);
  EXPECT_GE(st.sigma_eps2, 1e-6);
  EXPECT_GE(st.sigma_u2, 1e-6);
  EXPECT_DOUBLE_EQ(st.mu, 1.0);
}

TEST(RandomIntercept, Errors) {
  RandomStream s(71);
  ClusteredData one{DenseMatrix(1, 5, 0.0), DenseMatrix(1, 5, 0.0)};
  EXPECT_THROW(gibbs_random_intercept(one, MLPrior{}, kDefaultChain, s), std::invalid_argument);
  ClusteredData two{DenseMatrix(2, 1, 0.0), DenseMatrix(2, 1, 0.0)};
  EXPECT_THROW(gibbs_random_intercept(two, MLPrior{}, kDefaultChain, s), std::invalid_argument);
  const ClusteredData ok = gaussian_data(5, 2, 0, 0.5, 0.3, 1, 72);
  EXPECT_THROW(gibbs_random_intercept(ok, MLPrior{}, ChainLength{1, 0}, s), std::invalid_argument);
}

MLDraws single_draw(std::size_t K, double mu, double beta, double se2, double su2,
                    std::vector<double> u) {
  MLDraws d{{mu}, {beta}, {se2}, {su2}, DenseMatrix(1, K, std::move(u))};
  return d;
}

TEST(ClusterLoglik, UnitClusterAtOrigin) {
  ClusteredData data{DenseMatrix(3, 1, 0.0), DenseMatrix(3, 1, 0.3)};
  const LogLikMatrix L = cluster_loglik_matrix(data, single_draw(3, 0, 0, 1, 1, {0, 0, 0}));
  EXPECT_NEAR(L.values()(0, 0), 2.0 * -0.918938533, 1e-9);
  EXPECT_EQ(L.kind(), UnitKind::cluster);
  EXPECT_EQ(L.units(), 3u);
}

TEST(ClusterLoglik, ElementwiseOracle) {
  ClusteredData data{DenseMatrix(2, 2, std::vector<double>{0.5, -1.0, 2.0, 0.1}),
                     DenseMatrix(2, 2, std::vector<double>{1.0, -0.5, 0.2, 0.9})};
  const MLDraws d = single_draw(2, 0.3, 0.7, 1.5, 0.4, {0.2, -0.6});
  const LogLikMatrix L = cluster_loglik_matrix(data, d);
  for (std::size_t k = 0; k < 2; ++k) {
    double expected = normal_logpdf(d.u(0, k), 0.0, std::sqrt(0.4));
    for (std::size_t i = 0; i < 2; ++i)
      expected += normal_logpdf(data.y(k, i), 0.3 + 0.7 * data.x(k, i) + d.u(0, k), std::sqrt(1.5));
    EXPECT_EQ(L.values()(k, 0), expected);
  }
}

TEST(ClusterLoglik, DuplicatedAndPermutedClusters) {
  ClusteredData data = gaussian_data(6, 3, 0, 0.5, 0.3, 1, 73);
  for (std::size_t i = 0; i < 3; ++i) {
    data.y(4, i) = data.y(1, i);
    data.x(4, i) = data.x(1, i);
  }
  RandomStream s(74);
  MLDraws draws = gibbs_random_intercept(data, MLPrior{}, ChainLength{40, 10}, s);
  for (std::size_t t = 0; t < 40; ++t) draws.u(t, 4) = draws.u(t, 1);
  const LogLikMatrix L = cluster_loglik_matrix(data, draws);
  for (std::size_t t = 0; t < 40; ++t) EXPECT_EQ(L.values()(1, t), L.values()(4, t));

  const std::vector<std::size_t> perm{5, 3, 0, 1, 4, 2};
  ClusteredData pd{DenseMatrix(6, 3), DenseMatrix(6, 3)};
  MLDraws pdraws = draws;
  for (std::size_t k = 0; k < 6; ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      pd.y(k, i) = data.y(perm[k], i);
      pd.x(k, i) = data.x(perm[k], i);
    }
    for (std::size_t t = 0; t < 40; ++t) pdraws.u(t, k) = draws.u(t, perm[k]);
  }
  const LogLikMatrix P = cluster_loglik_matrix(pd, pdraws);
  for (std::size_t k = 0; k < 6; ++k)
    for (std::size_t t = 0; t < 40; ++t) EXPECT_EQ(P.values()(k, t), L.values()(perm[k], t));
}

TEST(ClusterLoglik, DimensionMismatch) {
  ClusteredData data{DenseMatrix(3, 2, 0.0), DenseMatrix(3, 2, 0.0)};
  EXPECT_THROW(cluster_loglik_matrix(data, single_draw(2, 0, 0, 1, 1, {0, 0})),
               std::invalid_argument);
}

}  // namespace
