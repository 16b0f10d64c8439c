#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ijse/distributions.hpp"
#include "ijse/errors.hpp"
#include "oracles.hpp"

namespace {

using namespace ijse;

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double fourth = 0.0;  // central fourth moment, for the SE of the variance
};

Moments sample_moments(const DistSpec& dist, std::size_t n, std::uint64_t seed) {
  RandomStream s(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = draw_scalar(dist, s);
  Moments m;
  m.mean = oracle::mean(x);
  m.var = oracle::variance(x);
  for (double v : x) m.fourth += std::pow(v - m.mean, 4);
  m.fourth /= static_cast<double>(n);
  return m;
}

// Empirical mean and variance within 5 Monte Carlo standard errors.
void expect_moments(const DistSpec& dist, double mean, double var, std::uint64_t seed) {
  const std::size_t n = 1000000;
  const Moments m = sample_moments(dist, n, seed);
  EXPECT_NEAR(m.mean, mean, 5.0 * std::sqrt(var / n));
  EXPECT_NEAR(m.var, var, 5.0 * std::sqrt((m.fourth - var * var) / n));
}

TEST(DrawScalar, DegenerateNormalIsExact) {
  RandomStream s(1);
  EXPECT_EQ(draw_scalar(Normal{5.0, 0.0}, s), 5.0);
}

TEST(DrawScalar, InverseGammaMean) {
  const Moments m = sample_moments(InverseGamma{3.0, 4.0}, 1000000, 2);
  EXPECT_NEAR(m.mean, 2.0, 0.01);
}

TEST(DrawScalar, ScaledStudentTHasUnitVariance) {
  RandomStream s(3);
  std::vector<double> x(1000000);
  for (auto& v : x) v = draw_scalar(StudentT{3.0}, s) * std::sqrt(1.0 / 3.0);
  EXPECT_NEAR(oracle::variance(x), 1.0, 0.02);
}

TEST(DrawScalar, MomentsMatchClosedForms) {
  expect_moments(Normal{1.5, 2.0}, 1.5, 4.0, 10);
  expect_moments(InverseGamma{6.0, 10.0}, 2.0, 100.0 / (25.0 * 4.0), 11);
  expect_moments(StudentT{8.0}, 0.0, 8.0 / 6.0, 12);
  expect_moments(Laplace{1.0}, 0.0, 2.0, 13);
  expect_moments(Laplace{0.5}, 0.0, 0.5, 14);
}

TEST(DrawScalar, GammaMomentsForSmallAndLargeShape) {
  for (double shape : {0.3, 1.0, 7.5}) {
    RandomStream s(20);
    const std::size_t n = 1000000;
    std::vector<double> x(n);
    for (auto& v : x) v = sample_gamma(shape, 2.0, s);
    const double var = shape / 4.0;
    EXPECT_NEAR(oracle::mean(x), shape / 2.0, 5.0 * std::sqrt(var / n)) << shape;
  }
}

TEST(DrawScalar, ParameterDomainErrors) {
  RandomStream s(4);
  EXPECT_THROW(draw_scalar(Normal{0.0, -1.0}, s), DomainError);
  EXPECT_THROW(draw_scalar(InverseGamma{0.0, 1.0}, s), DomainError);
  EXPECT_THROW(draw_scalar(InverseGamma{1.0, -2.0}, s), DomainError);
  EXPECT_THROW(draw_scalar(StudentT{0.0}, s), DomainError);
  EXPECT_THROW(draw_scalar(Laplace{0.0}, s), DomainError);
  EXPECT_THROW(draw_scalar(Normal{0.0, std::nan("")}, s), DomainError);
}

TEST(DrawScalar, AdvancesStreamDeterministically) {
  RandomStream a(6), b(6);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(draw_scalar(StudentT{3.0}, a), draw_scalar(StudentT{3.0}, b));
}

TEST(NormalLogpdf, StandardAtZero) {
  EXPECT_NEAR(normal_logpdf(0.0, 0.0, 1.0), -0.918938533204672742, 1e-15);
}

TEST(NormalLogpdf, ModeValue) {
  for (double m : {-3.0, 0.0, 2.5})
    for (double s : {0.1, 1.0, 7.0})
      EXPECT_NEAR(normal_logpdf(m, m, s), -0.5 * std::log(2.0 * std::numbers::pi) - std::log(s),
                  1e-14);
}

TEST(NormalLogpdf, DirectEvaluation) {
  // -0.5 log(2 pi) - log 2 - 1/8
  EXPECT_NEAR(normal_logpdf(1.0, 0.0, 2.0), -1.737085713764618, 1e-14);
}

TEST(NormalLogpdf, RejectsNonPositiveSigma) {
  EXPECT_THROW(normal_logpdf(0.0, 0.0, 0.0), DomainError);
  EXPECT_THROW(normal_logpdf(0.0, 0.0, -1.0), DomainError);
}

TEST(NormalLogpdf, DensityIntegratesToOne) {
  for (auto [mu, sigma] : {std::pair{0.0, 1.0}, std::pair{3.0, 0.2}, std::pair{-1.0, 5.0}}) {
    const double integral = oracle::simpson(
        [&](double y) { return std::exp(normal_logpdf(y, mu, sigma)); }, mu - 10.0 * sigma,
        mu + 10.0 * sigma, 20000);
    EXPECT_NEAR(integral, 1.0, 1e-6);
  }
}

}  // namespace
