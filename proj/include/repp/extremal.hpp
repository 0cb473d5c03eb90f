// Extremal-process paths, the projections h1, h2, h3 and h, record series
// and the limiting record law.
#pragma once

#include "repp/empirical.hpp"
#include "repp/observables.hpp"
#include "repp/point_measure.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace repp {

/// Piecewise constant path on [start, end): `initial` before the first
/// breakpoint, values[i] from breakpoints[i] on. Right-continuous by
/// default; left-continuous paths take the old value at a breakpoint.
struct StepPath {
  double start = 0.0;
  double end = 1.0;
  double initial = std::numeric_limits<double>::infinity();
  std::vector<double> breakpoints;
  std::vector<double> values;
  bool right_continuous = true;

  double at(double x) const;
  std::size_t jumps() const { return breakpoints.size(); }
  bool operator==(const StepPath&) const = default;
};

/// CSV `t,value`, the first row carrying the initial value at `start`.
void write_path_csv(std::ostream& os, const StepPath& path);

/// h1 m(t) = inf{y_i : t_i <= t} on [0, H); +inf before the first atom.
StepPath h1_project(const PointMeasure& pm);
/// h2 m(y) = inf{t_i : y_i < y} on [0, mark cap]; H where no mark lies below y.
StepPath h2_project(const PointMeasure& pm);

/// Z_n(t) = u_n^{-1}(M_{floor(nt)+1}) from observable values, censored to
/// +inf while the running minimum is above tau_max.
StepPath extremal_path(std::span<const double> values, const ThresholdScheme& ts, double tau_max,
                       double horizon = 1.0);
/// The same path from recorded visits of one orbit.
StepPath extremal_path(const OrbitHits& hits);

/// One atom per jump of the path, carrying the new value as its mark.
PointMeasure h3_jumps(const StepPath& path);
/// Atoms whose mark lies strictly below every other atom at an earlier or
/// equal time, with their marks.
PointMeasure h_record_projection(const PointMeasure& pm);

struct RecordSeries {
  std::vector<std::uint64_t> times;
  std::vector<double> raw;
  /// u_n^{-1} of the raw values; empty when no threshold scheme was given.
  std::vector<double> normalized;
  /// Records at indices >= exact_from are complete; earlier ones may be
  /// missing when the series was only observed below a mark cap.
  std::uint64_t exact_from = 0;

  std::size_t size() const { return times.size(); }
};

/// Strict records X_j > max(X_0, ..., X_{j-1}), with t_1 = 0.
RecordSeries record_times(std::span<const double> values);
RecordSeries record_times(std::span<const double> values, const ThresholdScheme& ts);
/// Records of an orbit seen through its visits below the mark cap: strict
/// decreases of the running minimum mark. Raw values are left empty.
RecordSeries record_times(const OrbitHits& hits);

struct RecordProcesses {
  /// Atoms at t_k / n.
  PointMeasure times;
  /// Atoms at the normalized record values, stored as the time coordinate.
  PointMeasure values;
};

RecordProcesses record_pp(const RecordSeries& rs, double n);

/// (a/b) log(b/a)^k / k!.
double record_law_pmf(double a, double b, unsigned k);

/// Number of atoms of a mark-free or scalar measure with time in (a, b).
std::uint64_t count_open(const PointMeasure& pm, double a, double b);

}  // namespace repp
