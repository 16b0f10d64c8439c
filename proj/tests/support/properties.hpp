#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ijse::oracle {

/// Checks the exact invariants of ijse_from_run on `instances` random
/// integer-valued instances and returns one message per violation.
std::vector<std::string> ijse_property_violations(std::uint64_t seed, std::size_t instances,
                                                  std::size_t max_units, std::size_t max_draws);

/// Largest relative gap between ijse_from_run and the two-pass reference over
/// `datasets` seeded mediation fits of size n.
double max_reference_gap(std::uint64_t seed, std::size_t datasets, std::size_t n);

}  // namespace ijse::oracle
