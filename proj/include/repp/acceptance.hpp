// The acceptance suite: fifteen named criteria with pinned tolerances.
#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace repp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  nlohmann::json data;
  double seconds = 0.0;

  /// "[PASS] #k name: details".
  std::string line() const;
};

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  /// Criteria to run; empty runs all.
  std::set<int> only;
  /// Scratch directory for the reproducibility criterion.
  std::filesystem::path scratch;
  unsigned workers = 0;
};

/// Runs the criteria in order, printing one line per criterion to `log`
/// as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log);

}  // namespace repp
