#include "ijse/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ijse {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> known) {
  for (const auto& [key, value] : obj.items()) {
    if (known.count(key) == 0) {
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

const json& object_at(const json& parent, const std::string& key, const std::string& path) {
  const json& v = parent.at(key);
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  return v;
}

std::uint64_t unsigned_at(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) {
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    throw ConfigError(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::size_t positive_at(const json& v, const std::string& path) {
  const auto n = unsigned_at(v, path);
  if (n == 0) throw ConfigError(path, "must be positive");
  return static_cast<std::size_t>(n);
}

std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

template <class Parse>
auto parsed_at(const json& v, const std::string& path, Parse&& parse) {
  const std::string text = string_at(v, path);
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

ChainLength chain_at(const json& v, const std::string& path, ChainLength fallback) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(v, path, {"retained", "burn_in"});
  if (v.contains("retained")) fallback.retained = positive_at(v["retained"], path + ".retained");
  if (v.contains("burn_in")) {
    fallback.burn_in = static_cast<std::size_t>(unsigned_at(v["burn_in"], path + ".burn_in"));
  }
  return fallback;
}

void read_grid(const json& v, const std::string& path, StudyGrid& grid) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(v, path, {"sizes", "reps", "dgps"});
  if (v.contains("sizes")) {
    const json& sizes = v["sizes"];
    if (!sizes.is_array() || sizes.empty()) throw ConfigError(path + ".sizes", "expected a non-empty array");
    grid.sizes.clear();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      grid.sizes.push_back(positive_at(sizes[i], path + ".sizes[" + std::to_string(i) + "]"));
    }
  }
  if (v.contains("reps")) grid.reps = positive_at(v["reps"], path + ".reps");
  if (v.contains("dgps")) {
    const json& dgps = v["dgps"];
    if (!dgps.is_array() || dgps.empty()) throw ConfigError(path + ".dgps", "expected a non-empty array");
    grid.dgps.clear();
    for (std::size_t i = 0; i < dgps.size(); ++i) {
      grid.dgps.push_back(
          parsed_at(dgps[i], path + ".dgps[" + std::to_string(i) + "]", parse_dgp_spec));
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error("config field '" + field + "': " + message), field_(std::move(field)) {}

StudyGrid default_grid(Study study) {
  switch (study) {
    case Study::mediation:
      return {study, {200, 500, 1000}, 400, {DgpSpec::correct, DgpSpec::misspecified}};
    case Study::anova: return {study, {200, 400, 600}, 300, {DgpSpec::misspecified}};
    case Study::icc:
    case Study::r2: return {study, {40, 80, 120}, 300, {DgpSpec::misspecified}};
  }
  return {};
}

RunConfig default_config() {
  RunConfig config;
  for (Study s : {Study::mediation, Study::anova, Study::icc, Study::r2}) {
    config.studies.push_back(default_grid(s));
  }
  return config;
}

RunConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<root>", "expected a JSON object");
  reject_unknown(root, "",
                 {"studies", "seed", "workers", "out", "chain", "bootstrap", "cluster_size",
                  "eta2_denominator", "coverage", "timings", "mediation", "anova", "icc", "r2"});

  RunConfig config = default_config();
  if (root.contains("studies")) {
    const json& studies = root["studies"];
    if (!studies.is_array() || studies.empty()) {
      throw ConfigError("studies", "expected a non-empty array of study names");
    }
    config.studies.clear();
    for (std::size_t i = 0; i < studies.size(); ++i) {
      const Study s = parsed_at(studies[i], "studies[" + std::to_string(i) + "]", parse_study);
      config.studies.push_back(default_grid(s));
    }
  }
  for (auto& grid : config.studies) {
    const std::string key(to_string(grid.study));
    if (root.contains(key)) read_grid(root[key], key, grid);
  }
  for (const char* key : {"mediation", "anova", "icc", "r2"}) {
    if (!root.contains(key)) continue;
    bool selected = false;
    for (const auto& grid : config.studies) selected |= to_string(grid.study) == key;
    if (!selected) {
      StudyGrid unused;
      read_grid(root[key], key, unused);
    }
  }

  if (root.contains("seed")) config.seed = unsigned_at(root["seed"], "seed");
  if (root.contains("workers")) config.workers = positive_at(root["workers"], "workers");
  if (root.contains("out")) config.out_dir = string_at(root["out"], "out");
  if (root.contains("chain")) config.chain = chain_at(root["chain"], "chain", config.chain);
  if (root.contains("bootstrap")) {
    const json& b = object_at(root, "bootstrap", "bootstrap");
    reject_unknown(b, "bootstrap", {"replicates", "retained", "burn_in"});
    if (b.contains("replicates")) {
      config.bootstrap_replicates =
          static_cast<std::size_t>(unsigned_at(b["replicates"], "bootstrap.replicates"));
    }
    json chain = json::object();
    if (b.contains("retained")) chain["retained"] = b["retained"];
    if (b.contains("burn_in")) chain["burn_in"] = b["burn_in"];
    config.bootstrap_chain = chain_at(chain, "bootstrap", config.bootstrap_chain);
  }
  if (root.contains("cluster_size")) {
    config.cluster_size = positive_at(root["cluster_size"], "cluster_size");
  }
  if (root.contains("eta2_denominator")) {
    const std::string d = string_at(root["eta2_denominator"], "eta2_denominator");
    if (d == "population") {
      config.eta2_denominator = GroupVarianceDenominator::population;
    } else if (d == "sample") {
      config.eta2_denominator = GroupVarianceDenominator::sample;
    } else {
      throw ConfigError("eta2_denominator", "expected 'population' (J) or 'sample' (J-1)");
    }
  }
  if (root.contains("coverage")) {
    const json& c = object_at(root, "coverage", "coverage");
    reject_unknown(c, "coverage", {"level", "target", "truth"});
    if (c.contains("level")) {
      if (!c["level"].is_number()) throw ConfigError("coverage.level", "expected a number");
      config.summary.level = c["level"].get<double>();
    }
    if (c.contains("target")) {
      const std::string t = string_at(c["target"], "coverage.target");
      if (t == "grand_mean") {
        config.coverage_target = CoverageTarget::grand_mean;
      } else if (t == "truth") {
        config.coverage_target = CoverageTarget::truth;
      } else {
        throw ConfigError("coverage.target", "expected 'grand_mean' or 'truth'");
      }
    }
    if (c.contains("truth")) {
      const json& truth = object_at(c, "truth", "coverage.truth");
      for (const auto& [key, value] : truth.items()) {
        const std::string path = "coverage.truth." + key;
        FunctionalId id;
        try {
          id = parse_functional_id(key);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(path, e.what());
        }
        if (!value.is_number()) throw ConfigError(path, "expected a number");
        config.summary.truth[id] = value.get<double>();
      }
    }
  }
  if (root.contains("timings")) {
    if (!root["timings"].is_boolean()) throw ConfigError("timings", "expected true or false");
    config.record_timings = root["timings"].get<bool>();
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const RunConfig& config) {
  if (config.studies.empty()) throw ConfigError("studies", "no study selected");
  for (const auto& grid : config.studies) {
    const std::string key(to_string(grid.study));
    if (grid.reps < 2) throw ConfigError(key + ".reps", "need at least 2 replications");
    if (grid.sizes.empty()) throw ConfigError(key + ".sizes", "no sizes given");
    if (grid.dgps.empty()) throw ConfigError(key + ".dgps", "no DGP given");
    for (std::size_t size : grid.sizes) {
      if (size < 2) throw ConfigError(key + ".sizes", "sizes must be at least 2");
      if (grid.study == Study::anova && size % 5 != 0) {
        throw ConfigError(key + ".sizes", "ANOVA sizes must be multiples of the 5 groups");
      }
    }
    if (grid.study != Study::mediation) {
      for (DgpSpec d : grid.dgps)
        if (d != DgpSpec::misspecified) {
          throw ConfigError(key + ".dgps", "only the misspecified DGP is defined for this study");
        }
    }
  }
  if (config.chain.retained < 2) throw ConfigError("chain.retained", "need T >= 2");
  if (config.bootstrap_replicates == 1) {
    throw ConfigError("bootstrap.replicates", "need B >= 2 (or 0 to skip the bootstrap)");
  }
  if (config.bootstrap_chain.retained < 1) throw ConfigError("bootstrap.retained", "must be positive");
  if (!(config.summary.level > 0.0 && config.summary.level < 1.0)) {
    throw ConfigError("coverage.level", "must lie strictly between 0 and 1");
  }
  if (config.coverage_target == CoverageTarget::truth) {
    for (const auto& grid : config.studies)
      for (FunctionalId id : study_functionals(grid.study))
        if (config.summary.truth.count(id) == 0) {
          throw ConfigError("coverage.truth." + std::string(to_string(id)),
                            "target 'truth' needs a value for every reported functional");
        }
  }
}

std::vector<StudyCondition> expand_conditions(const RunConfig& config) {
  std::vector<StudyCondition> out;
  for (const auto& grid : config.studies)
    for (DgpSpec dgp : grid.dgps)
      for (std::size_t size : grid.sizes) {
        StudyCondition c;
        c.study = grid.study;
        c.dgp = dgp;
        c.size = size;
        c.reps = grid.reps;
        c.bootstrap_replicates = config.bootstrap_replicates;
        c.chain = config.chain;
        c.bootstrap_chain = config.bootstrap_chain;
        c.master_seed = config.seed;
        c.cluster_size = config.cluster_size;
        c.eta2_denominator = config.eta2_denominator;
        c.record_timings = config.record_timings;
        out.push_back(c);
      }
  return out;
}

}  // namespace ijse
