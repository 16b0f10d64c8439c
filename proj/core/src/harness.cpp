#include "ijse/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <span>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "ijse/errors.hpp"
#include "ijse/gibbs_multilevel.hpp"

namespace ijse {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> column(const DenseMatrix& m, std::size_t c) { return m.column(c); }

std::vector<double> means_of(const std::vector<FunctionalDraws>& draws) {
  std::vector<double> out;
  out.reserve(draws.size());
  for (const auto& g : draws) out.push_back(post_mean(g));
  return out;
}

// Everything a study pipeline produces from one fit.
struct StudyFit {
  std::vector<FunctionalDraws> functionals;
  std::optional<LogLikMatrix> loglik;
};

// --- mediation -------------------------------------------------------------

std::vector<FunctionalDraws> mediation_functionals(const MediationDraws& d) {
  const auto a = column(d.mediator.beta, 1);
  const auto c_prime = column(d.outcome.beta, 1);
  const auto b = column(d.outcome.beta, 2);
  return {g1_indirect(a, b),
          g2_std_indirect(a, b, c_prime, d.mediator.sigma2, d.outcome.sigma2)};
}

MediationData resample(const MediationData& data, std::span<const std::size_t> idx) {
  MediationData out;
  out.x.reserve(idx.size());
  out.m.reserve(idx.size());
  out.y.reserve(idx.size());
  for (std::size_t i : idx) {
    out.x.push_back(data.x[i]);
    out.m.push_back(data.m[i]);
    out.y.push_back(data.y[i]);
  }
  return out;
}

// --- anova -----------------------------------------------------------------

RegressionData resample(const RegressionData& data, std::span<const std::size_t> idx) {
  RegressionData out{std::vector<double>(idx.size()), DenseMatrix(idx.size(), data.X.cols())};
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.y[r] = data.y[idx[r]];
    const auto src = data.X.row(idx[r]);
    for (std::size_t c = 0; c < src.size(); ++c) out.X(r, c) = src[c];
  }
  return out;
}

// --- multilevel ------------------------------------------------------------

std::vector<FunctionalDraws> multilevel_functionals(const ClusteredData& data, const MLDraws& d) {
  const double var_x = sample_variance(data.x.values());
  auto [g5, g6] = g5_g6_r2(d.beta, d.sigma_u2, d.sigma_eps2, var_x);
  return {g4_icc(d.sigma_u2, d.sigma_eps2), std::move(g5), std::move(g6)};
}

ClusteredData resample(const ClusteredData& data, std::span<const std::size_t> idx) {
  const std::size_t m = data.cluster_size();
  ClusteredData out{DenseMatrix(idx.size(), m), DenseMatrix(idx.size(), m)};
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t j = 0; j < m; ++j) {
      out.y(r, j) = data.y(idx[r], j);
      out.x(r, j) = data.x(idx[r], j);
    }
  return out;
}

// Runs fit -> functionals -> PostSD -> loglik + IJSE -> bootstrap, timing each
// stage by the shared convention.
template <class Data, class Fit, class Functionals, class Loglik>
void run_pipeline(const StudyCondition& cond, const Data& data, std::size_t units,
                  ResampleKind kind, Fit&& fit, Functionals&& functionals, Loglik&& loglik,
                  const RandomStream& rep_stream, ReplicationRecord& record) {
  const auto start = Clock::now();
  RandomStream fit_stream = rep_stream.substream(StreamPurpose::baseline_fit);
  const auto draws = fit(data, cond.chain, fit_stream);
  const std::vector<FunctionalDraws> g = functionals(data, draws);
  record.functionals.resize(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) {
    record.functionals[f].id = g[f].id;
    record.functionals[f].post_mean = post_mean(g[f]);
    record.functionals[f].se_postsd = post_sd(g[f]).value;
  }
  record.t_postsd_s = seconds_since(start);

  const auto ij_start = Clock::now();
  const LogLikMatrix L = loglik(data, draws);
  for (std::size_t f = 0; f < g.size(); ++f) {
    record.functionals[f].se_ijse = ijse_from_run(L, g[f]).value;
  }
  record.influence_units = L.units();
  record.t_ijse_s = record.t_postsd_s + seconds_since(ij_start);

  if (cond.bootstrap_replicates == 0) {
    for (auto& f : record.functionals) f.se_np = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  BootstrapSettings settings{cond.bootstrap_replicates, cond.bootstrap_chain, kind};
  auto refit = [&](std::span<const std::size_t> idx, ChainLength chain, RandomStream& stream) {
    Data boot = resample(data, idx);
    auto boot_draws = fit(boot, chain, stream);
    return means_of(functionals(boot, boot_draws));
  };
  auto extract = [](const std::vector<double>& means) { return means; };
  const BootstrapResult boot =
      bootstrap_se(units, refit, extract, settings, attempt_streams_from(rep_stream));
  for (std::size_t f = 0; f < g.size(); ++f) record.functionals[f].se_np = boot.estimates[f].value;
  record.bootstrap_failures = boot.failed_attempts;
  record.t_np_s = boot.wall_time_s;
}

void run_mediation(const StudyCondition& cond, const RandomStream& rep_stream,
                   ReplicationRecord& record) {
  RandomStream data_stream = rep_stream.substream(StreamPurpose::data);
  const MediationData data = gen_mediation(data_stream, cond.size, cond.dgp,
                                           MediationParams::defaults_for(cond.dgp));
  const NIGPrior prior;
  run_pipeline(
      cond, data, data.size(), ResampleKind::observation,
      [&](const MediationData& d, ChainLength chain, RandomStream& stream) {
        return fit_mediation_models(d, prior, chain, stream);
      },
      [](const MediationData&, const MediationDraws& d) { return mediation_functionals(d); },
      [](const MediationData& d, const MediationDraws& draws) {
        return mediation_loglik(d, draws);
      },
      rep_stream, record);
}

void run_anova(const StudyCondition& cond, const RandomStream& rep_stream,
               ReplicationRecord& record) {
  RandomStream data_stream = rep_stream.substream(StreamPurpose::data);
  const AnovaParams params;
  const RegressionData data = anova_design(gen_anova(data_stream, cond.size, params), params.groups);
  const NIGPrior prior;
  const std::size_t groups = params.groups;
  const auto denominator = cond.eta2_denominator;
  run_pipeline(
      cond, data, data.observations(), ResampleKind::observation,
      [&](const RegressionData& d, ChainLength chain, RandomStream& stream) {
        return gibbs_linreg(d, prior, chain, stream);
      },
      [=](const RegressionData&, const RegressionDraws& d) {
        return std::vector<FunctionalDraws>{g3_eta2(d.beta, d.sigma2, groups, denominator)};
      },
      [](const RegressionData& d, const RegressionDraws& draws) {
        return loglik_matrix_regression(d, draws);
      },
      rep_stream, record);
}

void run_multilevel(const StudyCondition& cond, const RandomStream& rep_stream,
                    ReplicationRecord& record) {
  RandomStream data_stream = rep_stream.substream(StreamPurpose::data);
  MultilevelParams params;
  params.cluster_size = cond.cluster_size;
  const ClusteredData data = gen_multilevel(data_stream, cond.size, params);
  const MLPrior prior;
  run_pipeline(
      cond, data, data.clusters(), ResampleKind::cluster,
      [&](const ClusteredData& d, ChainLength chain, RandomStream& stream) {
        return gibbs_random_intercept(d, prior, chain, stream);
      },
      [](const ClusteredData& d, const MLDraws& draws) { return multilevel_functionals(d, draws); },
      [](const ClusteredData& d, const MLDraws& draws) { return cluster_loglik_matrix(d, draws); },
      rep_stream, record);
}

}  // namespace

std::string_view to_string(Study study) {
  switch (study) {
    case Study::mediation: return "mediation";
    case Study::anova: return "anova";
    case Study::icc: return "icc";
    case Study::r2: return "r2";
  }
  return "mediation";
}

Study parse_study(std::string_view text) {
  if (text == "mediation") return Study::mediation;
  if (text == "anova") return Study::anova;
  if (text == "icc") return Study::icc;
  if (text == "r2") return Study::r2;
  throw std::invalid_argument("unknown study '" + std::string(text) +
                              "' (expected mediation, anova, icc or r2)");
}

std::vector<FunctionalId> study_functionals(Study study) {
  switch (study) {
    case Study::mediation: return {FunctionalId::g1, FunctionalId::g2};
    case Study::anova: return {FunctionalId::g3};
    case Study::icc:
    case Study::r2: return {FunctionalId::g4, FunctionalId::g5, FunctionalId::g6};
  }
  return {};
}

const FunctionalRecord* ReplicationRecord::find(FunctionalId id) const {
  for (const auto& f : functionals)
    if (f.id == id) return &f;
  return nullptr;
}

ReplicationRecord run_replication(const StudyCondition& cond, std::size_t rep) {
  if (rep < 1) throw std::invalid_argument("run_replication: rep is 1-based");
  ReplicationRecord record;
  record.study = cond.study;
  record.dgp = cond.dgp;
  record.size = cond.size;
  record.rep = rep;
  const RandomStream rep_stream(cond.master_seed, rep);
  record.seed = rep_stream.key();
  try {
    switch (cond.study) {
      case Study::mediation: run_mediation(cond, rep_stream, record); break;
      case Study::anova: run_anova(cond, rep_stream, record); break;
      case Study::icc:
      case Study::r2: run_multilevel(cond, rep_stream, record); break;
    }
  } catch (const DecompositionError& e) {
    record.failed = true;
    record.failure = e.what();
  } catch (const DataError& e) {
    record.failed = true;
    record.failure = e.what();
  } catch (const DomainError& e) {
    record.failed = true;
    record.failure = e.what();
  } catch (const BootstrapError& e) {
    record.failed = true;
    record.failure = e.what();
  }
  if (record.failed) {
    record.functionals.clear();
    record.t_postsd_s = record.t_ijse_s = record.t_np_s = 0.0;
    record.influence_units = 0;
  }
  if (!cond.record_timings) record.t_postsd_s = record.t_ijse_s = record.t_np_s = 0.0;
  return record;
}

std::vector<ReplicationRecord> run_condition(const StudyCondition& cond, std::size_t workers,
                                             const ProgressCallback& progress,
                                             const ReplicationFn& replicate) {
  const ReplicationFn run_one = replicate ? replicate : ReplicationFn(run_replication);
  if (cond.reps < 2) throw std::invalid_argument("run_condition: need R >= 2 replications");
  workers = std::max<std::size_t>(1, std::min(workers, cond.reps));
  std::vector<ReplicationRecord> records(cond.reps);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cond.reps) return;
      try {
        records[i] = run_one(cond, i + 1);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(cond.reps);
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        const std::lock_guard lock(progress_mutex);
        progress(finished, cond.reps);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::size_t failed = 0;
  for (const auto& r : records) failed += r.failed ? 1 : 0;
  if (20 * failed > cond.reps) {
    throw ConditionError(std::string(to_string(cond.study)) + " " +
                         std::string(to_string(cond.dgp)) + " size " +
                         std::to_string(cond.size) + ": " + std::to_string(failed) + " of " +
                         std::to_string(cond.reps) + " replications failed (limit 5%)");
  }
  return records;
}

double coverage_multiplier(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("coverage level must lie in (0, 1)");
  }
  if (level == 0.95) return 1.96;
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + level / 2.0);
}

std::vector<SummaryRow> summarize(const std::vector<ReplicationRecord>& records,
                                  FunctionalId functional, const SummaryOptions& options) {
  std::vector<const ReplicationRecord*> ok;
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (r.failed) {
      ++failed;
    } else if (r.find(functional) != nullptr) {
      ok.push_back(&r);
    }
  }
  if (ok.size() < 2) {
    throw std::invalid_argument("summarize: need at least 2 successful records with " +
                                std::string(to_string(functional)));
  }
  const std::size_t n = ok.size();
  std::vector<double> means(n);
  for (std::size_t r = 0; r < n; ++r) means[r] = ok[r]->find(functional)->post_mean;
  const double se_mc = sample_sd(means);
  double target = 0.0;
  if (const auto it = options.truth.find(functional); it != options.truth.end()) {
    target = it->second;
  } else {
    FunctionalDraws pm{functional, means};
    target = post_mean(pm);
  }
  const double z = coverage_multiplier(options.level);

  std::vector<SummaryRow> rows;
  for (Method method : {Method::post_sd, Method::ij, Method::np}) {
    long double se_sum = 0.0L;
    long double time_sum = 0.0L;
    std::size_t covered = 0;
    bool available = true;
    for (std::size_t r = 0; r < n; ++r) {
      const FunctionalRecord& f = *ok[r]->find(functional);
      const double se = method == Method::post_sd ? f.se_postsd
                        : method == Method::ij    ? f.se_ijse
                                                  : f.se_np;
      if (!std::isfinite(se)) {
        available = false;
        break;
      }
      se_sum += se;
      time_sum += method == Method::post_sd ? ok[r]->t_postsd_s
                  : method == Method::ij    ? ok[r]->t_ijse_s
                                            : ok[r]->t_np_s;
      if (std::abs(means[r] - target) <= z * se) ++covered;
    }
    if (!available) continue;
    SummaryRow row;
    row.study = ok.front()->study;
    row.dgp = ok.front()->dgp;
    row.size = ok.front()->size;
    row.functional = functional;
    row.method = method;
    row.se_mc = se_mc;
    row.mean_se = static_cast<double>(se_sum / n);
    row.bias = row.mean_se - se_mc;
    row.rel_err = se_mc > 0.0 ? row.bias / se_mc : std::numeric_limits<double>::quiet_NaN();
    row.coverage = static_cast<double>(covered) / static_cast<double>(n);
    row.mean_time_s = static_cast<double>(time_sum / n);
    row.n_failed = failed;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SummaryRow> summarize_all(const std::vector<ReplicationRecord>& records,
                                      const SummaryOptions& options) {
  std::vector<SummaryRow> rows;
  const ReplicationRecord* first = nullptr;
  for (const auto& r : records)
    if (!r.failed) {
      first = &r;
      break;
    }
  if (first == nullptr) throw std::invalid_argument("summarize_all: no successful records");
  for (FunctionalId id : study_functionals(first->study)) {
    auto part = summarize(records, id, options);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace ijse
