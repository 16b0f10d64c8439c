#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ijse/errors.hpp"
#include "ijse/small_matrix.hpp"

namespace {

using ijse::SmallMatrix;

SmallMatrix multiply_transpose(const SmallMatrix& l) {
  SmallMatrix out(l.dim());
  for (std::size_t r = 0; r < l.dim(); ++r)
    for (std::size_t c = 0; c < l.dim(); ++c)
      for (std::size_t k = 0; k < l.dim(); ++k) out(r, c) += l(r, k) * l(c, k);
  return out;
}

TEST(Cholesky, IdentityFactorsToIdentity) {
  EXPECT_EQ(ijse::chol_factor(SmallMatrix::identity(3)), SmallMatrix::identity(3));
}

TEST(Cholesky, HandFactorization) {
  const SmallMatrix l = ijse::chol_factor(SmallMatrix{{4, 2}, {2, 3}});
  EXPECT_DOUBLE_EQ(l(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(l(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(l(1, 0), 1.0);
  EXPECT_NEAR(l(1, 1), std::sqrt(2.0), 1e-15);
}

TEST(Cholesky, ReconstructsRandomSpdMatrices) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  for (std::size_t p = 1; p <= SmallMatrix::kMaxDim; ++p) {
    SmallMatrix b(p);
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t c = 0; c < p; ++c) b(r, c) = z(rng);
    SmallMatrix a = multiply_transpose(b);
    for (std::size_t j = 0; j < p; ++j) a(j, j) += 0.5;
    const SmallMatrix back = multiply_transpose(ijse::chol_factor(a));
    double err = 0.0, norm = 0.0;
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t c = 0; c < p; ++c) {
        err = std::max(err, std::abs(back(r, c) - a(r, c)));
        norm = std::max(norm, std::abs(a(r, c)));
      }
    EXPECT_LT(err / norm, 1e-10) << "p = " << p;
  }
}

TEST(Cholesky, NonSpdNamesFailingPivot) {
  try {
    ijse::chol_factor(SmallMatrix{{1, 2}, {2, 1}});
    FAIL() << "expected DecompositionError";
  } catch (const ijse::DecompositionError& e) {
    EXPECT_EQ(e.pivot(), 1u);
    EXPECT_DOUBLE_EQ(e.pivot_value(), -3.0);
    EXPECT_NE(std::string(e.what()).find("pivot 1"), std::string::npos);
  }
  EXPECT_THROW(ijse::chol_factor(SmallMatrix{{0.0}}), ijse::DecompositionError);
}

TEST(Cholesky, SolveAndInverse) {
  const SmallMatrix a{{4, 2, 0}, {2, 3, 1}, {0, 1, 2}};
  const SmallMatrix l = ijse::chol_factor(a);
  const std::vector<double> x = ijse::chol_solve(l, std::vector<double>{1, 2, 3});
  for (std::size_t r = 0; r < 3; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < 3; ++c) s += a(r, c) * x[c];
    EXPECT_NEAR(s, static_cast<double>(r + 1), 1e-13);
  }
  const SmallMatrix inv = ijse::chol_inverse(l);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += a(r, k) * inv(k, c);
      EXPECT_NEAR(s, r == c ? 1.0 : 0.0, 1e-13);
      EXPECT_EQ(inv(r, c), inv(c, r));
    }
}

TEST(DrawMvnormal, DiagonalCovarianceVariances) {
  ijse::RandomStream s(21);
  const std::vector<double> mean(3, 0.0);
  const SmallMatrix cov = SmallMatrix::diagonal(std::vector<double>{4, 4, 4});
  const int n = 1000000;
  std::vector<double> ss(3, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto x = ijse::draw_mvnormal(mean, cov, s);
    for (int j = 0; j < 3; ++j) ss[j] += x[j] * x[j];
  }
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(ss[j] / n, 4.0, 0.05);
}

TEST(DrawMvnormal, FullCovarianceConverges) {
  ijse::RandomStream s(22);
  const std::vector<double> mean{1.0, -2.0};
  const SmallMatrix cov{{2.0, 0.6}, {0.6, 1.0}};
  const int n = 400000;
  double m0 = 0, m1 = 0, c00 = 0, c01 = 0, c11 = 0;
  for (int i = 0; i < n; ++i) {
    const auto x = ijse::draw_mvnormal(mean, cov, s);
    m0 += x[0];
    m1 += x[1];
    c00 += (x[0] - 1.0) * (x[0] - 1.0);
    c01 += (x[0] - 1.0) * (x[1] + 2.0);
    c11 += (x[1] + 2.0) * (x[1] + 2.0);
  }
  EXPECT_NEAR(m0 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m1 / n, -2.0, 5.0 * std::sqrt(1.0 / n));
  EXPECT_NEAR(c00 / n, 2.0, 0.02);
  EXPECT_NEAR(c01 / n, 0.6, 0.01);
  EXPECT_NEAR(c11 / n, 1.0, 0.01);
}

}  // namespace
