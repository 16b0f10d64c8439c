#include "ijse/report.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "ijse/numeric_format.hpp"

namespace ijse {
namespace {

constexpr Method kMethods[] = {Method::post_sd, Method::ij, Method::np};

std::string method_label(Method m) {
  switch (m) {
    case Method::post_sd: return "PostSD";
    case Method::ij: return "IJSE";
    case Method::np: return "NP";
  }
  return "";
}

using CellKey = std::tuple<DgpSpec, std::size_t, FunctionalId, Method>;

// Rows of one table, indexed by (dgp, size, functional, method).
class TableRows {
 public:
  void add(const SummaryRow& row) {
    cells_.try_emplace(CellKey{row.dgp, row.size, row.functional, row.method}, row);
  }

  bool empty() const { return cells_.empty(); }

  const SummaryRow* find(DgpSpec dgp, std::size_t size, FunctionalId f, Method m) const {
    const auto it = cells_.find(CellKey{dgp, size, f, m});
    return it == cells_.end() ? nullptr : &it->second;
  }

  std::set<std::size_t> sizes(DgpSpec dgp) const {
    std::set<std::size_t> out;
    for (const auto& [key, row] : cells_)
      if (std::get<0>(key) == dgp) out.insert(std::get<1>(key));
    return out;
  }

  std::vector<Method> methods(DgpSpec dgp, std::size_t size) const {
    std::vector<Method> out;
    for (Method m : kMethods) {
      for (const auto& [key, row] : cells_) {
        if (std::get<0>(key) == dgp && std::get<1>(key) == size && std::get<3>(key) == m) {
          out.push_back(m);
          break;
        }
      }
    }
    return out;
  }

  std::set<DgpSpec> dgps() const {
    std::set<DgpSpec> out;
    for (const auto& [key, row] : cells_) out.insert(std::get<0>(key));
    return out;
  }

  // Gaps for the functionals a table needs, one message per missing cell group.
  void collect_gaps(const std::string& table, const std::vector<FunctionalId>& needed,
                    std::vector<std::string>& gaps) const {
    for (DgpSpec dgp : dgps())
      for (std::size_t size : sizes(dgp))
        for (FunctionalId f : needed) {
          std::string missing;
          for (Method m : methods(dgp, size))
            if (find(dgp, size, f, m) == nullptr) missing += " " + std::string(to_string(m));
          if (!missing.empty()) {
            gaps.push_back(table + " (" + std::string(to_string(dgp)) + ", size " +
                           std::to_string(size) + "): missing " + std::string(to_string(f)) +
                           " for" + missing);
          }
        }
  }

 private:
  std::map<CellKey, SummaryRow> cells_;
};

std::string measures(const SummaryRow* row, bool first) {
  if (row == nullptr) return " | | | | |";
  std::string out = " | ";
  out += first ? format_fixed(row->se_mc, 3) : "";
  out += " | " + format_fixed(row->mean_se, 3) + " | " + format_fixed(row->bias, 3) + " | " +
         format_signed_percent(row->rel_err) + " | " + format_fixed(row->coverage, 2);
  return out;
}

std::string time_cell(const SummaryRow* row) {
  return row == nullptr ? " |" : " | " + format_fixed(row->mean_time_s, 2) + " |";
}

std::string measure_header(const std::string& prefix) {
  return " | " + prefix + "SE_MC | " + prefix + "Mean SE | " + prefix + "Bias | " + prefix +
         "RelErr | " + prefix + "EC";
}

// Two-functional layout shared by the mediation and R² tables.
void paired_table(std::ostringstream& out, const TableRows& rows, DgpSpec dgp,
                  const std::string& size_label, FunctionalId left, FunctionalId right) {
  for (std::size_t size : rows.sizes(dgp)) {
    bool first = true;
    for (Method m : rows.methods(dgp, size)) {
      const SummaryRow* l = rows.find(dgp, size, left, m);
      const SummaryRow* r = rows.find(dgp, size, right, m);
      out << "| " << (first ? size_label + std::to_string(size) : std::string()) << " | "
          << method_label(m) << measures(l, first) << measures(r, first) << time_cell(l) << '\n';
      first = false;
    }
  }
}

std::string paired_header(const std::string& size_col, FunctionalId left, FunctionalId right) {
  const std::string l = std::string(to_string(left)) + " ";
  const std::string r = std::string(to_string(right)) + " ";
  std::string header = "| " + size_col + " | Method" + measure_header(l) + measure_header(r) +
                       " | Time (s) |\n|";
  for (int c = 0; c < 13; ++c) header += c < 2 ? ":---|" : "---:|";
  return header + '\n';
}

std::string empty_cells(int n) {
  std::string out;
  for (int c = 0; c < n; ++c) out += " |";
  return out;
}

void mediation_table(std::ostringstream& out, const TableRows& rows) {
  out << "## Mediation: indirect effect (g1 = ab) and standardized indirect effect "
         "(g2 = ab/sd(Y))\n\n";
  out << paired_header("N", FunctionalId::g1, FunctionalId::g2);
  const auto dgps = rows.dgps();
  if (dgps.count(DgpSpec::correct) != 0) {
    out << "| *Panel A: Correct specification* |" << empty_cells(12) << '\n';
    paired_table(out, rows, DgpSpec::correct, "", FunctionalId::g1, FunctionalId::g2);
  }
  if (dgps.count(DgpSpec::misspecified) != 0) {
    out << "| *Panel B: Misspecified DGP* |" << empty_cells(12) << '\n';
    paired_table(out, rows, DgpSpec::misspecified, "", FunctionalId::g1, FunctionalId::g2);
  }
  out << '\n';
}

void single_table(std::ostringstream& out, const TableRows& rows, FunctionalId f,
                  bool with_n, std::size_t cluster_size) {
  out << (with_n ? "| K | N | Method" : "| N | Method") << measure_header("")
      << " | Time (s) |\n|";
  const int cols = with_n ? 9 : 8;
  const int label_cols = with_n ? 3 : 2;
  for (int c = 0; c < cols; ++c) out << (c < label_cols ? ":---|" : "---:|");
  out << '\n';
  for (DgpSpec dgp : rows.dgps())
    for (std::size_t size : rows.sizes(dgp)) {
      bool first = true;
      for (Method m : rows.methods(dgp, size)) {
        const SummaryRow* row = rows.find(dgp, size, f, m);
        out << "| " << (first ? std::to_string(size) : std::string());
        if (with_n) out << " | " << (first ? std::to_string(size * cluster_size) : std::string());
        out << " | " << method_label(m) << measures(row, first) << time_cell(row) << '\n';
        first = false;
      }
    }
  out << '\n';
}

}  // namespace

std::string render_report(const std::vector<SummaryRow>& rows, const ReportOptions& options) {
  if (rows.empty()) throw ReportError("report: no summary rows to render");

  TableRows mediation, anova, icc, r2;
  bool has_icc_study = false, has_r2_study = false;
  for (const auto& row : rows) {
    has_icc_study |= row.study == Study::icc;
    has_r2_study |= row.study == Study::r2;
  }
  for (const auto& row : rows) {
    switch (row.study) {
      case Study::mediation: mediation.add(row); break;
      case Study::anova: anova.add(row); break;
      case Study::icc:
      case Study::r2: {
        // Prefer rows from the matching study; fall back to the sibling fit.
        const bool icc_source = row.study == Study::icc || !has_icc_study;
        const bool r2_source = row.study == Study::r2 || !has_r2_study;
        if (row.functional == FunctionalId::g4 && icc_source) icc.add(row);
        if ((row.functional == FunctionalId::g5 || row.functional == FunctionalId::g6) &&
            r2_source)
          r2.add(row);
        break;
      }
    }
  }

  std::vector<std::string> gaps;
  mediation.collect_gaps("mediation", {FunctionalId::g1, FunctionalId::g2}, gaps);
  anova.collect_gaps("anova", {FunctionalId::g3}, gaps);
  icc.collect_gaps("icc", {FunctionalId::g4}, gaps);
  r2.collect_gaps("r2", {FunctionalId::g5, FunctionalId::g6}, gaps);
  if (has_icc_study && icc.empty()) gaps.push_back("icc: missing g4 for every condition");
  if (has_r2_study && r2.empty()) gaps.push_back("r2: missing g5 and g6 for every condition");
  if (!gaps.empty()) {
    std::string message = "report: summary is incomplete:";
    for (const auto& g : gaps) message += "\n  " + g;
    throw ReportError(message);
  }

  std::ostringstream out;
  if (!mediation.empty()) mediation_table(out, mediation);
  if (!anova.empty()) {
    out << "## ANOVA effect size (g3 = eta^2)\n\n";
    single_table(out, anova, FunctionalId::g3, false, options.cluster_size);
  }
  if (!icc.empty()) {
    out << "## Intraclass correlation (g4)\n\n";
    single_table(out, icc, FunctionalId::g4, true, options.cluster_size);
  }
  if (!r2.empty()) {
    out << "## Marginal R² (g5) and conditional R² (g6)\n\n";
    out << paired_header("K", FunctionalId::g5, FunctionalId::g6);
    for (DgpSpec dgp : r2.dgps())
      paired_table(out, r2, dgp, "", FunctionalId::g5, FunctionalId::g6);
    out << "\nTimings are shared with the ICC table: g4, g5 and g6 are computed from the same "
           "MCMC run.\n\n";
  }
  std::string text = out.str();
  while (text.size() >= 2 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n')
    text.pop_back();
  return text;
}

}  // namespace ijse
