#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ijse/dgp.hpp"
#include "ijse/estimators.hpp"
#include "ijse/functionals.hpp"
#include "ijse/harness.hpp"
#include "ijse/loglik_matrix.hpp"

namespace ijse {

inline constexpr std::string_view kReplicationHeader =
    "study,dgp,size,rep,functional,post_mean,se_postsd,se_ijse,se_np,t_postsd_s,t_ijse_s,t_np_s,"
    "seed";
inline constexpr std::string_view kSummaryHeader =
    "study,dgp,size,functional,method,se_mc,mean_se,bias,rel_err,coverage,mean_time_s,n_failed";

/// One row per (record, functional). Failed records emit NA rows for every
/// study functional so the rep still appears in the file.
void write_replication_csv(std::ostream& out, const std::vector<ReplicationRecord>& records,
                           bool header = true);
std::vector<ReplicationRecord> read_replication_csv(std::istream& in);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows, bool header = true);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

/// Header `unit,d1,...,dT`, one row per unit. Row numbers in ParseError are
/// 1-based file lines, columns 1-based fields.
LogLikMatrix read_loglik_csv(std::istream& in, UnitKind kind);
void write_loglik_csv(std::ostream& out, const LogLikMatrix& loglik);

/// Header `g`, one draw per line.
FunctionalDraws read_draws_csv(std::istream& in);
void write_draws_csv(std::ostream& out, const FunctionalDraws& g);

void write_estimates(std::ostream& out, const std::vector<SEEstimate>& estimates);

/// Dataset dumps for `gen`: `x,m,y`, `group,y` and `cluster,x,y`.
void write_mediation_csv(std::ostream& out, const MediationData& data);
void write_anova_csv(std::ostream& out, const AnovaData& data);
void write_multilevel_csv(std::ostream& out, const ClusteredData& data);

/// Splits one CSV line on commas (no quoting; the formats here never need it).
std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace ijse
