// Statistical batteries shared by the commands and the acceptance suite:
// rectangle-grid tallies of ensembles, their comparison with analytic
// laws, and record-count runs.
#pragma once

#include "repp/empirical.hpp"
#include "repp/limits.hpp"
#include "repp/stats.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace repp {

/// Void counts and count means per rectangle family over an ensemble.
struct GridTally {
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> voids;
  std::vector<Estimate> means;
};

/// Total count of a family; compound measures add multiplicities and
/// ignore the mark sets.
double family_total(const PointMeasure& pm, const RectangleFamily& fam, bool compound);

GridTally tally_grid(std::size_t count, const std::function<PointMeasure(std::size_t)>& member,
                     const std::vector<RectangleFamily>& fams, bool compound, unsigned workers = 0);
GridTally tally_grid(const std::vector<PointMeasure>& ensemble, const std::vector<RectangleFamily>& fams,
                     bool compound);

/// One void test per family, named `<prefix>/<index>`.
std::vector<GofReport> void_reports(const GridTally& tally, const std::vector<double>& analytic,
                                    double level, const std::string& prefix);
std::vector<GofReport> mean_reports(const GridTally& tally, const std::vector<double>& expected,
                                    double level, const std::string& prefix);

/// Folds per-cell reports into one: statistic = failing cells, p-value =
/// Bonferroni-adjusted smallest p, rejected when fewer than
/// ceil(min_pass_fraction * cells) cells pass.
GofReport grid_verdict(const std::string& name, const std::vector<GofReport>& cells,
                       double min_pass_fraction);

/// Standard families that fit inside the window (scalar marks), or the
/// multi-dimensional families for the window radius.
std::vector<RectangleFamily> grid_for(int mark_dim, const Window& window);

std::vector<double> analytic_voids(const LimitLaw& law, const std::vector<RectangleFamily>& fams);
std::vector<double> expected_totals(const LimitLaw& law, const std::vector<RectangleFamily>& fams);

/// Samples `samples` measures of the law and returns the void and mean
/// reports per family at the given per-cell level.
struct LawCheck {
  std::vector<GofReport> voids;
  std::vector<GofReport> means;
};
LawCheck check_law_grid(const LimitLaw& law, const Window& window, const std::vector<RectangleFamily>& fams,
                        std::uint64_t samples, std::uint64_t seed, double level, unsigned workers = 0);

/// Record count of one orbit on the time interval (a, b).
struct RecordRun {
  std::uint64_t count = 0;
  /// Mark cap that made the count exact.
  double cap = 0.0;
};

/// Runs the orbit up to time b with increasing mark caps until the
/// running minimum at time a is observed.
RecordRun record_run(const SystemSpec& spec, const ObservableSpec& obs, double n, double a, double b,
                     double cap, std::uint64_t seed);

/// Record counts vs the log-Poisson law: chi-square on the histogram and a
/// z-test of the mean.
std::vector<GofReport> record_law_reports(const std::vector<std::uint64_t>& counts, double a, double b,
                                          double level = kDefaultLevel);

}  // namespace repp
