#include "ijse/distributions.hpp"

#include <cmath>
#include <string>

#include "ijse/errors.hpp"

namespace ijse {
namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " +
                      std::to_string(value));
  }
}

// Marsaglia & Tsang (2000) for shape >= 1, unit rate.
double gamma_unit_rate(double shape, RandomStream& stream) {
  if (shape < 1.0) {
    const double boosted = gamma_unit_rate(shape + 1.0, stream);
    return boosted * std::pow(stream.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = 0.0;
    double v = 0.0;
    do {
      z = stream.standard_normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_normal(double mu, double sigma, RandomStream& stream) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw DomainError("normal: sigma must be finite and >= 0, got " + std::to_string(sigma));
  }
  if (sigma == 0.0) return mu;
  return mu + sigma * stream.standard_normal();
}

double sample_gamma(double shape, double rate, RandomStream& stream) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  return gamma_unit_rate(shape, stream) / rate;
}

double sample_inverse_gamma(double shape, double rate, RandomStream& stream) {
  require_positive(shape, "inverse-gamma shape");
  require_positive(rate, "inverse-gamma rate");
  return rate / gamma_unit_rate(shape, stream);
}

double sample_chi_square(double dof, RandomStream& stream) {
  require_positive(dof, "chi-square dof");
  return 2.0 * gamma_unit_rate(0.5 * dof, stream);
}

double sample_student_t(double nu, RandomStream& stream) {
  require_positive(nu, "student-t nu");
  const double z = stream.standard_normal();
  return z / std::sqrt(sample_chi_square(nu, stream) / nu);
}

double sample_laplace(double scale, RandomStream& stream) {
  require_positive(scale, "laplace scale");
  const double u = stream.uniform() - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

double draw_scalar(const DistSpec& dist, RandomStream& stream) {
  struct Visitor {
    RandomStream& stream;
    double operator()(const Normal& d) const { return sample_normal(d.mu, d.sigma, stream); }
    double operator()(const InverseGamma& d) const {
      return sample_inverse_gamma(d.shape, d.rate, stream);
    }
    double operator()(const StudentT& d) const { return sample_student_t(d.nu, stream); }
    double operator()(const Laplace& d) const { return sample_laplace(d.scale, stream); }
  };
  return std::visit(Visitor{stream}, dist);
}

double normal_logpdf(double y, double mu, double sigma) {
  if (!(sigma > 0.0)) {
    throw DomainError("normal_logpdf: sigma must be positive, got " + std::to_string(sigma));
  }
  const double z = (y - mu) / sigma;
  return kLogInvSqrt2Pi - std::log(sigma) - 0.5 * z * z;
}

}  // namespace ijse
