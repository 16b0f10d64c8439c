#include "ijse_cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ijse/config.hpp"
#include "ijse/csv_io.hpp"
#include "ijse/dgp.hpp"
#include "ijse/errors.hpp"
#include "ijse/estimators.hpp"
#include "ijse/harness.hpp"
#include "ijse/report.hpp"

namespace ijse::cli {
namespace {

namespace fs = std::filesystem;

// Flags shared by `simulate` that override config keys.
struct SimulateFlags {
  fs::path config_path;
  std::vector<std::string> studies;
  std::vector<std::string> dgps;
  std::vector<std::size_t> sizes;
  std::size_t reps = 0;
  std::size_t bootstrap = 0;
  std::size_t retained = 0;
  std::size_t burn_in = 0;
  std::size_t boot_retained = 0;
  std::size_t boot_burn_in = 0;
  std::size_t cluster_size = 0;
  std::string eta2;
  double level = 0.95;
  std::string timings;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  fs::path out;
};

struct IjseFlags {
  fs::path loglik;
  fs::path draws;
  std::string unit_kind = "observation";
};

struct ReportFlags {
  std::vector<fs::path> inputs;
  fs::path out;
  std::size_t cluster_size = 5;
};

struct GenFlags {
  std::string study = "mediation";
  std::string dgp = "correct";
  std::size_t size = 200;
  std::size_t rep = 1;
  std::uint64_t seed = RunConfig{}.seed;
  std::size_t cluster_size = 5;
  fs::path out;
};

bool given(const CLI::App& app, const std::string& name) { return app.count(name) > 0; }

template <class Parse>
auto config_value(const std::string& field, const std::string& text, Parse&& parse) {
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

RunConfig build_config(const CLI::App& app, const SimulateFlags& f) {
  RunConfig config = given(app, "--config") ? load_config(f.config_path) : default_config();
  if (given(app, "--study")) {
    config.studies.clear();
    for (const auto& s : f.studies) {
      config.studies.push_back(default_grid(config_value("--study", s, parse_study)));
    }
  }
  for (auto& grid : config.studies) {
    if (given(app, "--dgp")) {
      grid.dgps.clear();
      for (const auto& d : f.dgps) grid.dgps.push_back(config_value("--dgp", d, parse_dgp_spec));
    }
    if (given(app, "--n")) grid.sizes = f.sizes;
    if (given(app, "--reps")) grid.reps = f.reps;
  }
  if (given(app, "--seed")) config.seed = f.seed;
  if (given(app, "--workers")) config.workers = f.workers;
  if (given(app, "--out")) config.out_dir = f.out;
  if (given(app, "--B")) config.bootstrap_replicates = f.bootstrap;
  if (given(app, "--T")) config.chain.retained = f.retained;
  if (given(app, "--burn")) config.chain.burn_in = f.burn_in;
  if (given(app, "--T-boot")) config.bootstrap_chain.retained = f.boot_retained;
  if (given(app, "--boot-burn")) config.bootstrap_chain.burn_in = f.boot_burn_in;
  if (given(app, "--cluster-size")) config.cluster_size = f.cluster_size;
  if (given(app, "--eta2-denominator")) {
    config.eta2_denominator = f.eta2 == "sample" ? GroupVarianceDenominator::sample
                                                 : GroupVarianceDenominator::population;
  }
  if (given(app, "--level")) config.summary.level = f.level;
  if (given(app, "--timings")) config.record_timings = f.timings == "on";
  if (config.workers == 0) throw ConfigError("--workers", "must be positive");
  validate(config);
  return config;
}

std::string condition_label(const StudyCondition& c) {
  return std::string(to_string(c.study)) + " " + std::string(to_string(c.dgp)) +
         (c.study == Study::icc || c.study == Study::r2 ? " K=" : " N=") + std::to_string(c.size);
}

int simulate(const CLI::App& app, const SimulateFlags& flags, std::ostream& out,
             std::ostream& err) {
  const RunConfig config = build_config(app, flags);
  SummaryOptions options = config.summary;
  if (config.coverage_target == CoverageTarget::grand_mean) options.truth.clear();

  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec || !fs::is_directory(config.out_dir)) {
    throw std::runtime_error("cannot create output directory '" + config.out_dir.string() +
                             "': " + ec.message());
  }

  std::vector<ReplicationRecord> all_records;
  std::vector<SummaryRow> all_rows;
  for (const StudyCondition& cond : expand_conditions(config)) {
    const std::string label = condition_label(cond);
    std::size_t next_report = 0;
    auto progress = [&](std::size_t done, std::size_t total) {
      if (done >= next_report || done == total) {
        err << "[" << label << "] " << done << "/" << total << '\n';
        next_report = done + std::max<std::size_t>(1, total / 10);
      }
    };
    auto records = run_condition(cond, config.workers, progress);
    auto rows = summarize_all(records, options);
    all_rows.insert(all_rows.end(), rows.begin(), rows.end());
    all_records.insert(all_records.end(), std::make_move_iterator(records.begin()),
                       std::make_move_iterator(records.end()));
  }

  const fs::path rep_path = config.out_dir / "replications.csv";
  const fs::path summary_path = config.out_dir / "summary.csv";
  write_atomically(rep_path, [&](std::ostream& os) { write_replication_csv(os, all_records); });
  write_atomically(summary_path, [&](std::ostream& os) { write_summary_csv(os, all_rows); });
  out << "wrote " << rep_path.string() << " and " << summary_path.string() << '\n';
  return kExitOk;
}

int ijse_command(const IjseFlags& flags, std::ostream& out) {
  const UnitKind kind = config_value("--unit-kind", flags.unit_kind, parse_unit_kind);
  std::ifstream l_in(flags.loglik);
  if (!l_in) throw std::runtime_error("cannot open '" + flags.loglik.string() + "'");
  std::ifstream g_in(flags.draws);
  if (!g_in) throw std::runtime_error("cannot open '" + flags.draws.string() + "'");
  const LogLikMatrix loglik = read_loglik_csv(l_in, kind);
  const FunctionalDraws g = read_draws_csv(g_in);
  write_estimates(out, {ijse_from_run(loglik, g), post_sd(g)});
  return kExitOk;
}

int report_command(const CLI::App& app, const ReportFlags& flags, std::ostream& out) {
  std::vector<SummaryRow> rows;
  for (const auto& path : flags.inputs) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    auto part = read_summary_csv(in);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const std::string text = render_report(rows, ReportOptions{flags.cluster_size});
  if (given(app, "--out")) {
    write_atomically(flags.out, [&](std::ostream& os) { os << text; });
  } else {
    out << text;
  }
  return kExitOk;
}

int gen_command(const CLI::App& app, const GenFlags& flags, std::ostream& out) {
  const Study study = config_value("--study", flags.study, parse_study);
  const DgpSpec dgp = config_value("--dgp", flags.dgp, parse_dgp_spec);
  if (flags.rep < 1) throw ConfigError("--rep", "replications are numbered from 1");
  // Same stream as replication `rep` of `simulate`, so the dump equals its dataset.
  RandomStream stream =
      RandomStream(flags.seed, flags.rep).substream(StreamPurpose::data);
  std::function<void(std::ostream&)> write;
  switch (study) {
    case Study::mediation: {
      auto data = gen_mediation(stream, flags.size, dgp, MediationParams::defaults_for(dgp));
      write = [data](std::ostream& os) { write_mediation_csv(os, data); };
      break;
    }
    case Study::anova: {
      if (flags.size % 5 != 0) throw ConfigError("--n", "ANOVA sizes must be multiples of 5");
      auto data = gen_anova(stream, flags.size, AnovaParams{});
      write = [data](std::ostream& os) { write_anova_csv(os, data); };
      break;
    }
    case Study::icc:
    case Study::r2: {
      MultilevelParams params;
      params.cluster_size = flags.cluster_size;
      auto data = gen_multilevel(stream, flags.size, params);
      write = [data](std::ostream& os) { write_multilevel_csv(os, data); };
      break;
    }
  }
  if (given(app, "--out")) {
    write_atomically(flags.out, write);
  } else {
    write(out);
  }
  return kExitOk;
}

}  // namespace

void write_atomically(const fs::path& path, const std::function<void(std::ostream&)>& write) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    write(os);
    os.flush();
    if (!os) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at '" + path.string() + "'");
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infinitesimal-jackknife standard errors for Bayesian posterior functionals"};
  app.require_subcommand(1);
  app.name("ijse");

  SimulateFlags sim;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Run simulation conditions");
  simulate_cmd->add_option("--config", sim.config_path, "JSON run configuration");
  simulate_cmd->add_option("--study", sim.studies, "mediation, anova, icc or r2");
  simulate_cmd->add_option("--dgp", sim.dgps, "correct or misspec");
  simulate_cmd->add_option("--n,--size", sim.sizes, "Sample sizes N (clusters K for icc/r2)");
  simulate_cmd->add_option("--reps", sim.reps, "Replications per condition");
  simulate_cmd->add_option("--B", sim.bootstrap, "Bootstrap resamples (0 skips the bootstrap)");
  simulate_cmd->add_option("--T", sim.retained, "Retained draws");
  simulate_cmd->add_option("--burn", sim.burn_in, "Burn-in draws");
  simulate_cmd->add_option("--T-boot", sim.boot_retained, "Retained draws per bootstrap refit");
  simulate_cmd->add_option("--boot-burn", sim.boot_burn_in, "Burn-in per bootstrap refit");
  simulate_cmd->add_option("--cluster-size", sim.cluster_size, "Observations per cluster");
  simulate_cmd->add_option("--eta2-denominator", sim.eta2, "population (J) or sample (J-1)")
      ->check(CLI::IsMember({"population", "sample"}));
  simulate_cmd->add_option("--level", sim.level, "Coverage level");
  simulate_cmd->add_option("--timings", sim.timings, "on, or off to write zero timings")
      ->check(CLI::IsMember({"on", "off"}));
  simulate_cmd->add_option("--seed", sim.seed, "Master seed");
  simulate_cmd->add_option("--workers", sim.workers, "Worker threads");
  simulate_cmd->add_option("--out", sim.out, "Output directory");

  IjseFlags ij;
  CLI::App* ijse_cmd = app.add_subcommand("ijse", "IJSE from a log-likelihood matrix and draws");
  ijse_cmd->add_option("--loglik", ij.loglik, "CSV with header unit,d1,...,dT")->required();
  ijse_cmd->add_option("--g", ij.draws, "CSV with header g")->required();
  ijse_cmd->add_option("--unit-kind", ij.unit_kind, "observation or cluster");

  ReportFlags rep;
  CLI::App* report_cmd = app.add_subcommand("report", "Markdown tables from summary CSVs");
  report_cmd->add_option("summaries", rep.inputs, "Summary CSV files")->required();
  report_cmd->add_option("--out", rep.out, "Markdown output file (default stdout)");
  report_cmd->add_option("--cluster-size", rep.cluster_size, "Observations per cluster");

  GenFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Dump one simulated dataset as CSV");
  gen_cmd->add_option("--study", gen.study, "mediation, anova, icc or r2");
  gen_cmd->add_option("--dgp", gen.dgp, "correct or misspec");
  gen_cmd->add_option("--n,--size", gen.size, "N, or K for icc/r2");
  gen_cmd->add_option("--rep", gen.rep, "Replication index (from 1)");
  gen_cmd->add_option("--seed", gen.seed, "Master seed");
  gen_cmd->add_option("--cluster-size", gen.cluster_size, "Observations per cluster");
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate_cmd->parsed()) return simulate(*simulate_cmd, sim, out, err);
    if (ijse_cmd->parsed()) return ijse_command(ij, out);
    if (report_cmd->parsed()) return report_command(*report_cmd, rep, out);
    if (gen_cmd->parsed()) return gen_command(*gen_cmd, gen, out);
  } catch (const ConfigError& e) {
    err << "ijse: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "ijse: parse error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "ijse: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace ijse::cli
