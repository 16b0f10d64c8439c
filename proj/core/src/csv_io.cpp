#include "ijse/csv_io.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "ijse/errors.hpp"
#include "ijse/numeric_format.hpp"

namespace ijse {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

void expect_header(std::istream& in, std::string_view header, std::size_t& line_no) {
  std::string line;
  if (!next_line(in, line, line_no)) throw ParseError("empty input; expected header", 1);
  if (line != header) {
    throw ParseError("unexpected header '" + line + "' (expected '" + std::string(header) + "')",
                     line_no);
  }
}

std::vector<std::string_view> fields_of(std::string_view line, std::size_t expected,
                                        std::size_t line_no) {
  auto fields = split_csv_line(line);
  if (fields.size() != expected) {
    throw ParseError("row " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                         " fields, expected " + std::to_string(expected),
                     line_no);
  }
  return fields;
}

double real_field(std::string_view text, std::size_t line_no, std::size_t col,
                  bool allow_na = false) {
  if (allow_na && text == "NA") return kNaN;
  const auto value = parse_real(text);
  if (!value) {
    throw ParseError("row " + std::to_string(line_no) + ", column " + std::to_string(col) +
                         ": '" + std::string(text) + "' is not a number",
                     line_no, col);
  }
  return *value;
}

template <class Int>
Int integer_field(std::string_view text, std::size_t line_no, std::size_t col) {
  Int value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("row " + std::to_string(line_no) + ", column " + std::to_string(col) +
                         ": '" + std::string(text) + "' is not an integer",
                     line_no, col);
  }
  return value;
}

template <class F>
auto named_field(F&& parse, std::string_view text, std::size_t line_no, std::size_t col) {
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    throw ParseError("row " + std::to_string(line_no) + ", column " + std::to_string(col) + ": " +
                         e.what(),
                     line_no, col);
  }
}

}  // namespace

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void write_replication_csv(std::ostream& out, const std::vector<ReplicationRecord>& records,
                           bool header) {
  if (header) out << kReplicationHeader << '\n';
  for (const auto& r : records) {
    const std::string prefix = std::string(to_string(r.study)) + ',' +
                               std::string(to_string(r.dgp)) + ',' + std::to_string(r.size) + ',' +
                               std::to_string(r.rep) + ',';
    if (r.failed) {
      for (FunctionalId id : study_functionals(r.study)) {
        out << prefix << to_string(id) << ",NA,NA,NA,NA,NA,NA,NA," << r.seed << '\n';
      }
      continue;
    }
    for (const auto& f : r.functionals) {
      out << prefix << to_string(f.id) << ',' << format_real(f.post_mean) << ','
          << format_real(f.se_postsd) << ',' << format_real(f.se_ijse) << ','
          << format_real(f.se_np) << ',' << format_real(r.t_postsd_s) << ','
          << format_real(r.t_ijse_s) << ',' << format_real(r.t_np_s) << ',' << r.seed << '\n';
    }
  }
}

std::vector<ReplicationRecord> read_replication_csv(std::istream& in) {
  std::size_t line_no = 0;
  expect_header(in, kReplicationHeader, line_no);
  std::vector<ReplicationRecord> records;
  std::string line;
  while (next_line(in, line, line_no)) {
    const auto f = fields_of(line, 13, line_no);
    const Study study = named_field(parse_study, f[0], line_no, 1);
    const DgpSpec dgp = named_field(parse_dgp_spec, f[1], line_no, 2);
    const auto size = integer_field<std::size_t>(f[2], line_no, 3);
    const auto rep = integer_field<std::size_t>(f[3], line_no, 4);
    const FunctionalId id = named_field(parse_functional_id, f[4], line_no, 5);
    const auto seed = integer_field<std::uint64_t>(f[12], line_no, 13);
    const bool failed = f[5] == "NA";

    if (records.empty() || records.back().study != study || records.back().dgp != dgp ||
        records.back().size != size || records.back().rep != rep) {
      ReplicationRecord r;
      r.study = study;
      r.dgp = dgp;
      r.size = size;
      r.rep = rep;
      r.seed = seed;
      r.failed = failed;
      if (failed) r.failure = "failed replication";
      records.push_back(std::move(r));
    }
    ReplicationRecord& r = records.back();
    if (failed) continue;
    FunctionalRecord fr;
    fr.id = id;
    fr.post_mean = real_field(f[5], line_no, 6);
    fr.se_postsd = real_field(f[6], line_no, 7);
    fr.se_ijse = real_field(f[7], line_no, 8);
    fr.se_np = real_field(f[8], line_no, 9, true);
    r.t_postsd_s = real_field(f[9], line_no, 10);
    r.t_ijse_s = real_field(f[10], line_no, 11);
    r.t_np_s = real_field(f[11], line_no, 12, true);
    r.functionals.push_back(fr);
  }
  return records;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows, bool header) {
  if (header) out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.study) << ',' << to_string(r.dgp) << ',' << r.size << ','
        << to_string(r.functional) << ',' << to_string(r.method) << ',' << format_real(r.se_mc)
        << ',' << format_real(r.mean_se) << ',' << format_real(r.bias) << ','
        << format_real(r.rel_err) << ',' << format_real(r.coverage) << ','
        << format_real(r.mean_time_s) << ',' << r.n_failed << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::size_t line_no = 0;
  expect_header(in, kSummaryHeader, line_no);
  std::vector<SummaryRow> rows;
  std::string line;
  while (next_line(in, line, line_no)) {
    const auto f = fields_of(line, 12, line_no);
    SummaryRow r;
    r.study = named_field(parse_study, f[0], line_no, 1);
    r.dgp = named_field(parse_dgp_spec, f[1], line_no, 2);
    r.size = integer_field<std::size_t>(f[2], line_no, 3);
    r.functional = named_field(parse_functional_id, f[3], line_no, 4);
    r.method = named_field(parse_method, f[4], line_no, 5);
    r.se_mc = real_field(f[5], line_no, 6);
    r.mean_se = real_field(f[6], line_no, 7);
    r.bias = real_field(f[7], line_no, 8);
    r.rel_err = real_field(f[8], line_no, 9, true);
    r.coverage = real_field(f[9], line_no, 10);
    r.mean_time_s = real_field(f[10], line_no, 11);
    r.n_failed = integer_field<std::size_t>(f[11], line_no, 12);
    rows.push_back(r);
  }
  return rows;
}

LogLikMatrix read_loglik_csv(std::istream& in, UnitKind kind) {
  std::size_t line_no = 0;
  std::string line;
  if (!next_line(in, line, line_no)) throw ParseError("empty log-likelihood file", 1);
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "unit") {
    throw ParseError("log-likelihood header must be 'unit,d1,...,dT'", line_no);
  }
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] != "d" + std::to_string(c)) {
      throw ParseError("log-likelihood header column " + std::to_string(c + 1) + " should be 'd" +
                           std::to_string(c) + "'",
                       line_no, c + 1);
    }
  }
  const std::size_t draws = header.size() - 1;
  std::vector<double> values;
  std::size_t units = 0;
  while (next_line(in, line, line_no)) {
    const auto f = fields_of(line, draws + 1, line_no);
    for (std::size_t c = 1; c <= draws; ++c) values.push_back(real_field(f[c], line_no, c + 1));
    ++units;
  }
  if (units < 2) throw DomainError("log-likelihood matrix needs at least 2 units");
  if (draws < 2) throw DomainError("log-likelihood matrix needs at least 2 draws");
  return LogLikMatrix(DenseMatrix(units, draws, std::move(values)), kind);
}

void write_loglik_csv(std::ostream& out, const LogLikMatrix& loglik) {
  out << "unit";
  for (std::size_t t = 1; t <= loglik.draws(); ++t) out << ",d" << t;
  out << '\n';
  for (std::size_t u = 0; u < loglik.units(); ++u) {
    out << u + 1;
    for (double v : loglik.values().row(u)) out << ',' << format_real(v);
    out << '\n';
  }
}

FunctionalDraws read_draws_csv(std::istream& in) {
  std::size_t line_no = 0;
  expect_header(in, "g", line_no);
  FunctionalDraws g;
  std::string line;
  while (next_line(in, line, line_no)) {
    const auto f = fields_of(line, 1, line_no);
    g.values.push_back(real_field(f[0], line_no, 1));
  }
  if (g.values.size() < 2) throw DomainError("functional draws need at least 2 values");
  return g;
}

void write_draws_csv(std::ostream& out, const FunctionalDraws& g) {
  out << "g\n";
  for (double v : g.values) out << format_real(v) << '\n';
}

void write_estimates(std::ostream& out, const std::vector<SEEstimate>& estimates) {
  out << "method,value\n";
  for (const auto& e : estimates) out << to_string(e.method) << ',' << format_real(e.value) << '\n';
}

void write_mediation_csv(std::ostream& out, const MediationData& data) {
  out << "x,m,y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << format_real(data.x[i]) << ',' << format_real(data.m[i]) << ','
        << format_real(data.y[i]) << '\n';
  }
}

void write_anova_csv(std::ostream& out, const AnovaData& data) {
  out << "group,y\n";
  for (std::size_t i = 0; i < data.y.size(); ++i) {
    out << data.group[i] << ',' << format_real(data.y[i]) << '\n';
  }
}

void write_multilevel_csv(std::ostream& out, const ClusteredData& data) {
  out << "cluster,x,y\n";
  for (std::size_t k = 0; k < data.clusters(); ++k)
    for (std::size_t j = 0; j < data.cluster_size(); ++j) {
      out << k + 1 << ',' << format_real(data.x(k, j)) << ',' << format_real(data.y(k, j)) << '\n';
    }
}

}  // namespace ijse
