#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ijse/errors.hpp"
#include "ijse/functionals.hpp"
#include "ijse/gibbs_regression.hpp"
#include "ijse/loglik_matrix.hpp"
#include "ijse/random.hpp"

namespace ijse {

enum class Method { post_sd, ij, np };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

struct SEEstimate {
  Method method = Method::post_sd;
  double value = 0.0;
  double wall_time_s = 0.0;
};

struct InfluenceVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// Posterior mean of the functional draws.
double post_mean(const FunctionalDraws& g);

/// Posterior standard deviation (denominator T - 1).
SEEstimate post_sd(const FunctionalDraws& g);

/// I_u = U * sum_t Ltilde_u^(t) gtilde^(t) / (T - 1), where g is centred over
/// draws and L is centred over units within each draw.
InfluenceVector influence_proxies(const LogLikMatrix& loglik, const FunctionalDraws& g);

/// sqrt( sum_u (I_u - Ibar)^2 / (U (U - 1)) ).
SEEstimate ijse(const InfluenceVector& influence);

/// Infinitesimal-jackknife SE from a single MCMC run. Observation- and
/// cluster-level matrices are treated identically; only U differs.
SEEstimate ijse_from_run(const LogLikMatrix& loglik, const FunctionalDraws& g);

/// Sample standard deviation with denominator n - 1, centred on the first value.
double sample_sd(std::span<const double> values);

// ---------------------------------------------------------------------------
// Nonparametric bootstrap

enum class ResampleKind { observation, cluster };

struct BootstrapSettings {
  std::size_t replicates = 100;
  ChainLength chain = kDefaultBootstrapChain;
  ResampleKind kind = ResampleKind::observation;
};

struct BootstrapResult {
  std::vector<SEEstimate> estimates;        // one NP estimate per extracted functional
  std::vector<std::vector<double>> means;   // replicates x functionals
  std::size_t failed_attempts = 0;
  double wall_time_s = 0.0;
};

/// Raised when more than 3B resample attempts are needed to collect B refits.
class BootstrapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stream for resample attempt `a`; the indices and the refit chain are drawn
/// from dedicated substreams of it.
using AttemptStreams = std::function<RandomStream(std::size_t attempt)>;

AttemptStreams attempt_streams_from(const RandomStream& base);

/// `units` indices drawn uniformly with replacement.
std::vector<std::size_t> draw_resample_indices(std::size_t units, RandomStream& stream);

/// Posterior means of each functional over B resamples, reduced to NP SEs.
///
/// `refit(indices, chain, stream)` fits the model to the resampled units
/// (observations or whole clusters) and `extract(fit)` returns the posterior
/// means of the functionals of interest. Refits that throw DecompositionError,
/// DataError or DomainError are recorded and the resample is redrawn; after
/// 3B attempts the bootstrap is abandoned with BootstrapError. Results are
/// reduced in attempt order, so the outcome is a pure function of the streams.
template <class Refit, class Extract>
BootstrapResult bootstrap_se(std::size_t units, Refit&& refit, Extract&& extract,
                             const BootstrapSettings& settings, const AttemptStreams& streams) {
  if (settings.replicates < 2) throw std::invalid_argument("bootstrap_se: need B >= 2");
  if (units < 1) throw std::invalid_argument("bootstrap_se: need at least one unit");
  const auto start = std::chrono::steady_clock::now();

  BootstrapResult result;
  result.means.reserve(settings.replicates);
  const std::size_t max_attempts = 3 * settings.replicates;
  std::size_t attempt = 0;
  while (result.means.size() < settings.replicates) {
    if (attempt == max_attempts) {
      throw BootstrapError("bootstrap_se: " + std::to_string(result.failed_attempts) +
                           " of " + std::to_string(attempt) +
                           " refits failed; giving up on pathological data");
    }
    RandomStream stream = streams(attempt++);
    RandomStream index_stream = stream.substream(StreamPurpose::bootstrap_indices);
    RandomStream fit_stream = stream.substream(StreamPurpose::bootstrap_fit);
    const std::vector<std::size_t> indices = draw_resample_indices(units, index_stream);
    try {
      auto fit = refit(std::span<const std::size_t>(indices), settings.chain, fit_stream);
      std::vector<double> means = extract(fit);
      if (!result.means.empty() && means.size() != result.means.front().size()) {
        throw std::logic_error("bootstrap_se: extractor changed its output length");
      }
      result.means.push_back(std::move(means));
    } catch (const DecompositionError&) {
      ++result.failed_attempts;
    } catch (const DataError&) {
      ++result.failed_attempts;
    } catch (const DomainError&) {
      ++result.failed_attempts;
    }
  }

  const std::size_t functionals = result.means.front().size();
  std::vector<double> column(settings.replicates);
  for (std::size_t f = 0; f < functionals; ++f) {
    for (std::size_t b = 0; b < settings.replicates; ++b) column[b] = result.means[b][f];
    result.estimates.push_back(SEEstimate{Method::np, sample_sd(column), 0.0});
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& estimate : result.estimates) estimate.wall_time_s = result.wall_time_s;
  return result;
}

}  // namespace ijse
