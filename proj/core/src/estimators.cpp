#include "ijse/estimators.hpp"

#include <cmath>
#include <string>

namespace ijse {
namespace {

// Correctly rounded sum of doubles (Shewchuk's algorithm, as in Python's
// math.fsum). The result does not depend on the order of the inputs.
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  double value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    // Round half-even across the remaining partials.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::post_sd: return "PostSD";
    case Method::ij: return "IJ";
    case Method::np: return "NP";
  }
  return "PostSD";
}

Method parse_method(std::string_view text) {
  if (text == "PostSD") return Method::post_sd;
  if (text == "IJ") return Method::ij;
  if (text == "NP") return Method::np;
  throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("sample_sd: need at least 2 values");
  const long double shift = values.front();
  long double sum = 0.0L;
  for (double v : values) sum += v - shift;
  const long double mean = sum / static_cast<long double>(values.size());
  long double ss = 0.0L;
  for (double v : values) {
    const long double d = (v - shift) - mean;
    ss += d * d;
  }
  return static_cast<double>(std::sqrt(ss / static_cast<long double>(values.size() - 1)));
}

double post_mean(const FunctionalDraws& g) {
  if (g.values.empty()) throw std::invalid_argument("post_mean: no draws");
  long double sum = 0.0L;
  for (double v : g.values) sum += v;
  return static_cast<double>(sum / static_cast<long double>(g.values.size()));
}

SEEstimate post_sd(const FunctionalDraws& g) {
  if (g.values.size() < 2) throw std::invalid_argument("post_sd: need T >= 2 draws");
  return SEEstimate{Method::post_sd, sample_sd(g.values), 0.0};
}

InfluenceVector influence_proxies(const LogLikMatrix& loglik, const FunctionalDraws& g) {
  const std::size_t units = loglik.units();
  const std::size_t draws = loglik.draws();
  if (g.values.size() != draws) {
    throw std::invalid_argument("influence_proxies: log-likelihood matrix has " +
                                std::to_string(draws) + " draws but g has " +
                                std::to_string(g.values.size()));
  }
  if (draws < 2) throw std::invalid_argument("influence_proxies: need T >= 2 draws");
  const DenseMatrix& L = loglik.values();

  // Centre g over draws.
  long double g_sum = 0.0L;
  for (double v : g.values) g_sum += v;
  const long double g_bar = g_sum / static_cast<long double>(draws);
  std::vector<long double> g_tilde(draws);
  for (std::size_t t = 0; t < draws; ++t) g_tilde[t] = g.values[t] - g_bar;

  // Per-draw mean over units. Compensated (TwoSum) column sums carry the
  // rounding error of each addition, giving about twice double precision.
  std::vector<double> col_sum(draws, 0.0);
  std::vector<double> col_err(draws, 0.0);
  for (std::size_t u = 0; u < units; ++u) {
    const double* row = L.row(u).data();
    for (std::size_t t = 0; t < draws; ++t) {
      const double x = row[t];
      const double s = col_sum[t] + x;
      const double z = s - col_sum[t];
      col_err[t] += (col_sum[t] - (s - z)) + (x - z);
      col_sum[t] = s;
    }
  }
  std::vector<long double> l_bar(draws);
  for (std::size_t t = 0; t < draws; ++t) {
    l_bar[t] = (static_cast<long double>(col_sum[t]) + col_err[t]) / static_cast<long double>(units);
  }

  const long double scale =
      static_cast<long double>(units) / static_cast<long double>(draws - 1);
  InfluenceVector out{std::vector<double>(units)};
  for (std::size_t u = 0; u < units; ++u) {
    const double* row = L.row(u).data();
    // Four interleaved accumulators, combined in a fixed order.
    long double acc[4] = {0.0L, 0.0L, 0.0L, 0.0L};
    std::size_t t = 0;
    for (; t + 4 <= draws; t += 4) {
      acc[0] += (row[t] - l_bar[t]) * g_tilde[t];
      acc[1] += (row[t + 1] - l_bar[t + 1]) * g_tilde[t + 1];
      acc[2] += (row[t + 2] - l_bar[t + 2]) * g_tilde[t + 2];
      acc[3] += (row[t + 3] - l_bar[t + 3]) * g_tilde[t + 3];
    }
    for (; t < draws; ++t) acc[0] += (row[t] - l_bar[t]) * g_tilde[t];
    out.values[u] = static_cast<double>(scale * ((acc[0] + acc[1]) + (acc[2] + acc[3])));
  }
  return out;
}

SEEstimate ijse(const InfluenceVector& influence) {
  const std::size_t units = influence.size();
  if (units < 2) throw std::invalid_argument("ijse: need U >= 2 units");

  ExactSum total;
  for (double v : influence.values) total.add(v);
  const double mean = total.value() / static_cast<double>(units);

  // Squares split exactly into hi + lo so that the sum is order independent.
  ExactSum squares;
  for (double v : influence.values) {
    const double d = v - mean;
    const double hi = d * d;
    squares.add(hi);
    squares.add(std::fma(d, d, -hi));
  }
  const double denom = static_cast<double>(units) * static_cast<double>(units - 1);
  return SEEstimate{Method::ij, std::sqrt(squares.value() / denom), 0.0};
}

SEEstimate ijse_from_run(const LogLikMatrix& loglik, const FunctionalDraws& g) {
  return ijse(influence_proxies(loglik, g));
}

AttemptStreams attempt_streams_from(const RandomStream& base) {
  return [base](std::size_t attempt) {
    return base.substream(StreamPurpose::bootstrap, attempt);
  };
}

std::vector<std::size_t> draw_resample_indices(std::size_t units, RandomStream& stream) {
  std::vector<std::size_t> indices(units);
  for (auto& index : indices) index = static_cast<std::size_t>(stream.uniform_index(units));
  return indices;
}

}  // namespace ijse
