#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ijse/harness.hpp"

namespace ijse {

/// Invalid configuration; `field()` names the offending key (dotted path).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct StudyGrid {
  Study study = Study::mediation;
  std::vector<std::size_t> sizes;
  std::size_t reps = 0;
  std::vector<DgpSpec> dgps;
};

enum class CoverageTarget { grand_mean, truth };

struct RunConfig {
  std::vector<StudyGrid> studies;
  std::uint64_t seed = 20240101;
  std::size_t workers = 1;
  std::filesystem::path out_dir = "results";
  ChainLength chain = kDefaultChain;
  ChainLength bootstrap_chain = kDefaultBootstrapChain;
  std::size_t bootstrap_replicates = 100;
  std::size_t cluster_size = 5;
  GroupVarianceDenominator eta2_denominator = GroupVarianceDenominator::population;
  CoverageTarget coverage_target = CoverageTarget::grand_mean;
  SummaryOptions summary;
  bool record_timings = true;
};

/// Default grid for one study: mediation N in {200,500,1000} x both DGPs with
/// R = 400; anova N in {200,400,600}, icc/r2 K in {40,80,120}, misspecified, R = 300.
StudyGrid default_grid(Study study);

/// All four studies with their default grids.
RunConfig default_config();

/// JSON config. Every key is optional and falls back to the default; unknown
/// keys are rejected. Listing studies under "studies" selects only those.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Checks cross-field constraints (reps >= 2, T >= 2, truth values present, ...).
void validate(const RunConfig& config);

std::vector<StudyCondition> expand_conditions(const RunConfig& config);

}  // namespace ijse
