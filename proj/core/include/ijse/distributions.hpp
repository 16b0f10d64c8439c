#pragma once

#include <variant>

#include "ijse/random.hpp"

namespace ijse {

struct Normal {
  double mu = 0.0;
  double sigma = 1.0;  // sigma == 0 is the degenerate point mass at mu
};

/// Shape-rate parameterization: density proportional to x^(-shape-1) exp(-rate/x).
struct InverseGamma {
  double shape = 1.0;
  double rate = 1.0;
};

/// Standard Student-t with nu degrees of freedom (not rescaled).
struct StudentT {
  double nu = 1.0;
};

/// Zero-centred Laplace with the given scale; variance 2 * scale^2.
struct Laplace {
  double scale = 1.0;
};

using DistSpec = std::variant<Normal, InverseGamma, StudentT, Laplace>;

/// Draws one variate. Throws DomainError when parameters are invalid.
double draw_scalar(const DistSpec& dist, RandomStream& stream);

// Direct samplers used by the Gibbs blocks and generators.
double sample_normal(double mu, double sigma, RandomStream& stream);
double sample_gamma(double shape, double rate, RandomStream& stream);
double sample_inverse_gamma(double shape, double rate, RandomStream& stream);
double sample_chi_square(double dof, RandomStream& stream);
double sample_student_t(double nu, RandomStream& stream);
double sample_laplace(double scale, RandomStream& stream);

/// log N(y; mu, sigma^2). Throws DomainError for sigma <= 0.
double normal_logpdf(double y, double mu, double sigma);

/// -0.5 * log(2 pi)
inline constexpr double kLogInvSqrt2Pi = -0.91893853320467274178;

}  // namespace ijse
