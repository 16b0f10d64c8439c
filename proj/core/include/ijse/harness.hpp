#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ijse/dgp.hpp"
#include "ijse/estimators.hpp"
#include "ijse/functionals.hpp"
#include "ijse/gibbs_regression.hpp"

namespace ijse {

enum class Study { mediation, anova, icc, r2 };

std::string_view to_string(Study study);
Study parse_study(std::string_view text);

/// Functionals reported by a study. Icc and R2 share one multilevel fit and
/// both report g4, g5 and g6.
std::vector<FunctionalId> study_functionals(Study study);

struct StudyCondition {
  Study study = Study::mediation;
  DgpSpec dgp = DgpSpec::correct;
  std::size_t size = 200;  // N, or K for the multilevel studies
  std::size_t reps = 400;
  std::size_t bootstrap_replicates = 100;  // 0 skips the bootstrap
  ChainLength chain = kDefaultChain;
  ChainLength bootstrap_chain = kDefaultBootstrapChain;
  std::uint64_t master_seed = 20240101;
  std::size_t cluster_size = 5;
  GroupVarianceDenominator eta2_denominator = GroupVarianceDenominator::population;
  bool record_timings = true;  // false writes zero timings so output is byte-reproducible
};

struct FunctionalRecord {
  FunctionalId id = FunctionalId::g1;
  double post_mean = 0.0;
  double se_postsd = 0.0;
  double se_ijse = 0.0;
  double se_np = 0.0;  // NaN when the bootstrap was skipped
};

struct ReplicationRecord {
  Study study = Study::mediation;
  DgpSpec dgp = DgpSpec::correct;
  std::size_t size = 0;
  std::size_t rep = 0;  // 1-based
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  std::vector<FunctionalRecord> functionals;
  // Shared by every functional of the record, since all come from one fit.
  double t_postsd_s = 0.0;
  double t_ijse_s = 0.0;
  double t_np_s = 0.0;
  std::size_t influence_units = 0;
  std::size_t bootstrap_failures = 0;

  const FunctionalRecord* find(FunctionalId id) const;
};

/// Generates the dataset for `rep`, fits the working model and computes every
/// study functional with its PostSD, IJSE and bootstrap SE. Sampler failures
/// are caught and returned as a failed record.
ReplicationRecord run_replication(const StudyCondition& cond, std::size_t rep);

/// Raised when more than 5% of a condition's replications fail.
class ConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;
using ReplicationFn = std::function<ReplicationRecord(const StudyCondition&, std::size_t rep)>;

/// Records for reps 1..R in rep order, independent of the worker count.
/// `replicate` defaults to run_replication.
std::vector<ReplicationRecord> run_condition(const StudyCondition& cond, std::size_t workers = 1,
                                             const ProgressCallback& progress = {},
                                             const ReplicationFn& replicate = {});

struct SummaryOptions {
  double level = 0.95;
  // Coverage target per functional; the grand mean of the point estimates when absent.
  std::map<FunctionalId, double> truth;
};

struct SummaryRow {
  Study study = Study::mediation;
  DgpSpec dgp = DgpSpec::correct;
  std::size_t size = 0;
  FunctionalId functional = FunctionalId::g1;
  Method method = Method::post_sd;
  double se_mc = 0.0;
  double mean_se = 0.0;
  double bias = 0.0;
  double rel_err = 0.0;  // NaN when se_mc == 0
  double coverage = 0.0;
  double mean_time_s = 0.0;
  std::size_t n_failed = 0;
};

/// Normal multiplier for a two-sided interval; exactly 1.96 at level 0.95.
double coverage_multiplier(double level);

/// One row per method for `functional`. Failed records are excluded and counted.
std::vector<SummaryRow> summarize(const std::vector<ReplicationRecord>& records,
                                  FunctionalId functional, const SummaryOptions& options = {});

/// summarize() for every functional present in the records, in study order.
std::vector<SummaryRow> summarize_all(const std::vector<ReplicationRecord>& records,
                                      const SummaryOptions& options = {});

}  // namespace ijse
