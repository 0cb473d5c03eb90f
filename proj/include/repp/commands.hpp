// The repp-lab commands. Each writes its outputs and a report_v1 JSON into
// the output directory and returns the report with an exit code
// (0 pass, 1 statistical failure).
#pragma once

#include "repp/config.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace repp {

struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = ".";
  std::string suite;
  unsigned workers = 0;
};

struct CommandOutcome {
  int exit_code = 0;
  nlohmann::json report;
};

/// Orbits and empirical REPPs: one CSV per run, clusters.json, report.json.
CommandOutcome cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out);
/// Limit-law samples (samples.csv, scatter.svg) with a self-check on the
/// rectangle grid; suite "figure1" writes the Poisson and stacked panels.
CommandOutcome cmd_limit_sample(const RunConfig& cfg, const std::filesystem::path& out, const std::string& suite);
/// Stats battery of a simulate artifact against the configured law.
CommandOutcome cmd_compare(const RunConfig& cfg, const std::filesystem::path& out);
/// Record counts against the log-Poisson law, or the excess demonstration.
CommandOutcome cmd_records(const RunConfig& cfg, const std::filesystem::path& out);
/// nu of the configured set with a Monte-Carlo cross-check.
CommandOutcome cmd_nu(const RunConfig& cfg, const std::filesystem::path& out);
/// Aggregates every report_v1 below the output directory into summary.json.
CommandOutcome cmd_report(const std::filesystem::path& out);

/// Loads the configuration, applies overrides and dispatches. Progress
/// lines (acceptance results) go to `log`.
CommandOutcome run_command(const std::string& name, const CommandOptions& opt, std::ostream& log);

}  // namespace repp
