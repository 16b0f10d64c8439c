#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ijse/harness.hpp"

namespace ijse {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReportOptions {
  std::size_t cluster_size = 5;  // for the N column of the ICC table
};

/// Markdown tables for every study present in `rows`: mediation (Panels A/B),
/// ANOVA, ICC, and marginal/conditional R². The ICC and R² tables draw on
/// either multilevel study since both carry g4, g5 and g6 from one fit.
/// Throws ReportError on empty input or when a table is missing a functional.
std::string render_report(const std::vector<SummaryRow>& rows, const ReportOptions& options = {});

}  // namespace ijse
