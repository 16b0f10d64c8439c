// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
//   ijse_acceptance            run every criterion
//   ijse_acceptance 1 2 12     run the listed criteria only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ijse/csv_io.hpp"
#include "ijse/dgp.hpp"
#include "ijse/estimators.hpp"
#include "ijse/gibbs_multilevel.hpp"
#include "ijse/gibbs_regression.hpp"
#include "ijse/harness.hpp"
#include "ijse/numeric_format.hpp"
#include "oracles.hpp"
#include "properties.hpp"

namespace {

using namespace ijse;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string pct(double ratio) { return format_fixed(100.0 * ratio, 1) + "%"; }
std::string num(double v, int d = 3) { return format_fixed(v, d); }

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

StudyCondition paper_condition(Study study, DgpSpec dgp, std::size_t size, std::size_t reps) {
  StudyCondition c;
  c.study = study;
  c.dgp = dgp;
  c.size = size;
  c.reps = reps;
  return c;
}

// Long conditions are shared between criteria and run at most once.
class ConditionCache {
 public:
  const std::vector<ReplicationRecord>& records(const StudyCondition& cond) {
    const std::string key = std::string(to_string(cond.study)) + "/" +
                            std::string(to_string(cond.dgp)) + "/" + std::to_string(cond.size);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      std::cerr << "  running " << key << " with R=" << cond.reps << " ..." << std::endl;
      it = cache_.emplace(key, run_condition(cond, workers())).first;
    }
    return it->second;
  }

  const SummaryRow& row(const StudyCondition& cond, FunctionalId f, Method m) {
    const std::string key = std::string(to_string(cond.study)) + "/" +
                            std::string(to_string(cond.dgp)) + "/" + std::to_string(cond.size) +
                            "/" + std::string(to_string(f));
    auto it = summaries_.find(key);
    if (it == summaries_.end()) it = summaries_.emplace(key, summarize(records(cond), f)).first;
    for (const auto& r : it->second)
      if (r.method == m) return r;
    throw std::runtime_error("no summary row for " + key + " " + std::string(to_string(m)));
  }

 private:
  std::map<std::string, std::vector<ReplicationRecord>> cache_;
  std::map<std::string, std::vector<SummaryRow>> summaries_;
};

ConditionCache cache;

const StudyCondition kMedCorrect = paper_condition(Study::mediation, DgpSpec::correct, 500, 400);
const StudyCondition kMedMisspec =
    paper_condition(Study::mediation, DgpSpec::misspecified, 500, 400);
const StudyCondition kAnova = paper_condition(Study::anova, DgpSpec::misspecified, 400, 300);
const StudyCondition kIcc = paper_condition(Study::icc, DgpSpec::misspecified, 80, 300);
const StudyCondition kR2 = paper_condition(Study::r2, DgpSpec::misspecified, 120, 300);

Outcome hand_oracle() {
  const LogLikMatrix L(DenseMatrix(2, 2, std::vector<double>{0, 1, 0, 0}), UnitKind::observation);
  const double se = ijse_from_run(L, FunctionalDraws{FunctionalId::external, {0, 2}}).value;
  return {std::abs(se - 1.0) <= 1e-12, "IJSE = " + format_real(se)};
}

Outcome reference_equivalence() {
  const double gap = oracle::max_reference_gap(2024, 20, 200);
  return {gap <= 1e-12, "max relative gap " + format_real(gap)};
}

Outcome conjugacy() {
  RandomStream ds(31);
  RegressionData d{std::vector<double>(200), DenseMatrix(200, 3)};
  for (std::size_t i = 0; i < 200; ++i) {
    d.X(i, 0) = 1.0;
    d.X(i, 1) = ds.standard_normal();
    d.X(i, 2) = ds.uniform() * 2.0 - 1.0;
    d.y[i] = 0.5 + 1.2 * d.X(i, 1) - 0.7 * d.X(i, 2) + ds.standard_normal();
  }
  RandomStream s(32);
  const RegressionDraws draws = gibbs_linreg(d, NIGPrior{}, kDefaultChain, s);
  const auto m_n = oracle::ridge_solution(oracle::to_rows(d.X), d.y, 1.0 / NIGPrior{}.tau2);
  bool ok = true;
  std::string detail;
  for (std::size_t j = 0; j < 3; ++j) {
    const auto col = draws.beta.column(j);
    const double z = (oracle::mean(col) - m_n[j]) / oracle::batch_means_se(col);
    ok &= std::abs(z) <= 3.0;
    detail += (j ? ", " : "") + std::string("z") + std::to_string(j) + " = " + num(z, 2);
  }
  return {ok, detail + " (MCSE units)"};
}

Outcome slope_block() {
  RandomStream ds(61);
  ClusteredData data{DenseMatrix(30, 5), DenseMatrix(30, 5)};
  for (std::size_t k = 0; k < 30; ++k) {
    const double u = std::sqrt(0.3) * ds.standard_normal();
    for (std::size_t i = 0; i < 5; ++i) {
      data.x(k, i) = ds.standard_normal();
      data.y(k, i) = 0.2 + 0.5 * data.x(k, i) + u + std::sqrt(1.7) * ds.standard_normal();
    }
  }
  RandomInterceptState state = initial_state(data);
  state.mu = 0.1;
  state.sigma_eps2 = 1.4;
  const MLPrior prior;
  double sxr = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < 30; ++k)
    for (std::size_t i = 0; i < 5; ++i) {
      sxr += data.x(k, i) * (data.y(k, i) - state.mu - state.u[k]);
      sxx += data.x(k, i) * data.x(k, i);
    }
  const double precision = sxx / state.sigma_eps2 + 1.0 / prior.tau_beta2;
  const double mean = sxr / state.sigma_eps2 / precision, var = 1.0 / precision;
  RandomStream s(62);
  const std::size_t n = 100000;
  std::vector<double> draws(n);
  for (auto& b : draws) {
    update_slope(data, prior, state, s);
    b = state.beta;
  }
  const double z_mean = (oracle::mean(draws) - mean) / std::sqrt(var / n);
  const double z_var = (oracle::variance(draws) - var) / (var * std::sqrt(2.0 / (n - 1)));
  return {std::abs(z_mean) <= 3.0 && std::abs(z_var) <= 3.0,
          "mean z = " + num(z_mean, 2) + ", variance z = " + num(z_var, 2)};
}

std::string cell(const SummaryRow& r) {
  return std::string(to_string(r.method)) + " RelErr " + pct(r.rel_err) + " EC " +
         num(r.coverage, 3);
}

Outcome table1_correct() {
  bool ok = true;
  std::string detail;
  for (auto f : {FunctionalId::g1, FunctionalId::g2})
    for (auto m : {Method::post_sd, Method::ij, Method::np}) {
      const SummaryRow& r = cache.row(kMedCorrect, f, m);
      ok &= std::abs(r.rel_err) <= 0.06 && r.coverage >= 0.91 && r.coverage <= 0.97;
      detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(f)) + " " + cell(r);
    }
  return {ok, detail};
}

Outcome table1_misspec() {
  bool ok = true;
  std::string detail;
  for (auto f : {FunctionalId::g1, FunctionalId::g2}) {
    const SummaryRow& p = cache.row(kMedMisspec, f, Method::post_sd);
    const SummaryRow& ij = cache.row(kMedMisspec, f, Method::ij);
    const SummaryRow& np = cache.row(kMedMisspec, f, Method::np);
    ok &= p.rel_err <= -0.60 && p.coverage <= 0.70;
    ok &= std::abs(ij.rel_err - np.rel_err) <= 0.06;
    ok &= ij.coverage >= 0.85;
    detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(f)) + " " +
              cell(p) + ", " + cell(ij) + ", " + cell(np);
  }
  return {ok, detail};
}

Outcome table2() {
  const SummaryRow& p = cache.row(kAnova, FunctionalId::g3, Method::post_sd);
  const SummaryRow& ij = cache.row(kAnova, FunctionalId::g3, Method::ij);
  const SummaryRow& np = cache.row(kAnova, FunctionalId::g3, Method::np);
  const bool ok = p.rel_err >= -0.45 && p.rel_err <= -0.20 && ij.rel_err >= -0.27 &&
                  ij.rel_err <= -0.03 && std::abs(ij.rel_err - np.rel_err) <= 0.06;
  return {ok, cell(p) + ", " + cell(ij) + ", " + cell(np)};
}

Outcome table3() {
  const SummaryRow& p = cache.row(kIcc, FunctionalId::g4, Method::post_sd);
  const SummaryRow& ij = cache.row(kIcc, FunctionalId::g4, Method::ij);
  const bool ok = ij.rel_err - p.rel_err >= 0.05 && p.coverage <= 0.82;
  return {ok, cell(p) + ", " + cell(ij) + ", " + cell(cache.row(kIcc, FunctionalId::g4, Method::np))};
}

// Every rep's g4/g5/g6 rows in the replication CSV carry the same three timing fields.
bool shared_timings(const std::vector<ReplicationRecord>& records) {
  std::ostringstream out;
  write_replication_csv(out, records);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::map<std::string, std::set<std::string>> timings;
  std::map<std::string, std::size_t> rows;
  while (std::getline(in, line)) {
    const auto f = split_csv_line(line);
    const std::string rep(f[3]);
    timings[rep].insert(std::string(f[9]) + "," + std::string(f[10]) + "," + std::string(f[11]));
    ++rows[rep];
  }
  if (timings.size() != records.size()) return false;
  for (const auto& [rep, t] : timings)
    if (t.size() != 1 || rows[rep] != 3) return false;
  return true;
}

Outcome table4() {
  bool ok = true;
  std::string detail = "g5:";
  for (auto m : {Method::post_sd, Method::ij, Method::np}) {
    const SummaryRow& r = cache.row(kR2, FunctionalId::g5, m);
    ok &= r.rel_err >= -0.20 && r.rel_err <= 0.02;
    detail += " " + cell(r) + ";";
  }
  const SummaryRow& p6 = cache.row(kR2, FunctionalId::g6, Method::post_sd);
  const SummaryRow& ij6 = cache.row(kR2, FunctionalId::g6, Method::ij);
  ok &= ij6.rel_err - p6.rel_err >= 0.05;
  const bool shared = shared_timings(cache.records(kR2));
  ok &= shared;
  return {ok, detail + " g6: " + cell(p6) + ", " + cell(ij6) +
                  (shared ? "; timings shared" : "; timings NOT shared")};
}

Outcome agreement() {
  bool ok = true;
  std::string detail;
  for (auto [f, threshold] : {std::pair{FunctionalId::g1, 0.85}, std::pair{FunctionalId::g2, 0.80}}) {
    std::vector<double> ij, np;
    for (const auto& rec : cache.records(kMedMisspec)) {
      if (rec.failed) continue;
      ij.push_back(rec.find(f)->se_ijse);
      np.push_back(rec.find(f)->se_np);
    }
    const double r = oracle::correlation(ij, np);
    ok &= r > threshold;
    detail += std::string(detail.empty() ? "" : ", ") + "corr " + std::string(to_string(f)) +
              " = " + num(r);
  }
  return {ok, detail};
}

Outcome cost() {
  const SummaryRow& ij = cache.row(kMedMisspec, FunctionalId::g1, Method::ij);
  const SummaryRow& np = cache.row(kMedMisspec, FunctionalId::g1, Method::np);
  return {ij.mean_time_s <= np.mean_time_s / 5.0,
          "IJSE " + num(ij.mean_time_s, 4) + " s, NP " + num(np.mean_time_s, 4) + " s, ratio " +
              num(np.mean_time_s / ij.mean_time_s, 1)};
}

Outcome properties() {
  const auto violations = oracle::ijse_property_violations(12, 1000, 10, 50);
  for (std::size_t i = 0; i < std::min<std::size_t>(violations.size(), 5); ++i)
    std::cerr << "  " << violations[i] << '\n';
  return {violations.empty(), std::to_string(violations.size()) + " violations over 1000 instances"};
}

Outcome determinism() {
  StudyCondition cond = paper_condition(Study::mediation, DgpSpec::misspecified, 200, 16);
  cond.record_timings = false;
  std::ostringstream one, eight;
  write_replication_csv(one, run_condition(cond, 1));
  write_replication_csv(eight, run_condition(cond, 8));
  const bool same = one.str() == eight.str();
  return {same, same ? std::to_string(one.str().size()) + " identical bytes" : "CSV differs"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "IJSE hand oracle", hand_oracle},
      {2, "independent-oracle equivalence", reference_equivalence},
      {3, "conjugacy oracle", conjugacy},
      {4, "single-block conditional oracle", slope_block},
      {5, "mediation correct, N=500", table1_correct},
      {6, "mediation misspecified, N=500", table1_misspec},
      {7, "ANOVA, N=400", table2},
      {8, "ICC, K=80", table3},
      {9, "R2, K=120", table4},
      {10, "IJSE-bootstrap agreement", agreement},
      {11, "cost comparison", cost},
      {12, "property suite", properties},
      {13, "determinism across worker counts", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && selected.count(c.id) == 0) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail
              << " (" << num(secs, 2) << " s)" << std::endl;
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
