// Empirical rare events point processes built from orbits, the A^(q)
// construction, q selection, clusters, and the D'_q diagnostic.
#pragma once

#include "repp/observables.hpp"
#include "repp/point_measure.hpp"
#include "repp/systems.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace repp {

// ---------------------------------------------------------------------------
// Orbit runs

struct OrbitRunConfig {
  SystemSpec spec;
  ThresholdScheme ts;
  double horizon = 1.0;
  /// Visits with marks above this cap are not recorded.
  double mark_cap = 10.0;
  /// Extra steps scanned past n*horizon (needed for A^(q) look-ahead).
  std::uint64_t lookahead = 0;
  /// Digit resolution; 0 picks suggested_resolution(b, n*H, 1e-6).
  int resolution = 0;
  bool keep_offsets = false;
};

/// Visits of one orbit to the mark window, in time order.
struct OrbitHits {
  double n = 1.0;
  double horizon = 1.0;
  double mark_cap = 10.0;
  std::uint64_t length = 0;   // steps j in [0, length) form the series
  std::uint64_t scanned = 0;  // steps actually scanned (length + look-ahead)
  int dim = 1;
  std::vector<std::uint64_t> index;
  std::vector<double> mark;
  std::vector<int> site;
  std::vector<double> offset;  // dim values per hit when kept

  std::size_t size() const { return index.size(); }
};

/// Scans one digit-shift orbit from a seeded random initial point.
/// Throws ResolutionError if a visit cannot be resolved.
OrbitHits run_orbit(const OrbitRunConfig& cfg, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Builders

/// N_n^1: atom at j/n for each j with values[j] > u (no marks).
PointMeasure build_repp1(std::span<const double> values, double u, double n, double horizon = 1.0);

/// N_n: atom (j/n, u_n^{-1}(values[j])) whenever that mark is <= tau_max.
PointMeasure build_repp2(std::span<const double> values, const ThresholdScheme& ts,
                         double tau_max, double horizon = 1.0);

/// N_n^*: atom (j/n, (x_j - zeta) * chart_scale) for points whose
/// normalised offset has norm below `radius`.
PointMeasure build_repp_multi(const std::vector<std::vector<double>>& positions,
                              const ThresholdScheme& ts, double radius, double horizon = 1.0);

/// N_n^1 at level u_n(tau) from recorded visits (marks below tau).
PointMeasure repp1_from_hits(const OrbitHits& hits, double tau);
/// N_n from recorded visits; look-ahead visits are kept when asked.
PointMeasure repp2_from_hits(const OrbitHits& hits, bool include_lookahead = false);
/// N_n^* from recorded visits kept with offsets.
PointMeasure repp_multi_from_hits(const OrbitHits& hits, double chart_scale, double radius);

// ---------------------------------------------------------------------------
// A^(q) and q

/// A \ (T^{-1}A u ... u T^{-q}A).
RationalIntervalUnion aq_set(const RationalIntervalUnion& a, const SystemSpec& spec, int q);

struct ChooseQOptions {
  Rational tau_lo{0};
  Rational tau_hi{1};
  /// n values of the ladder (default 2^10, 2^12, ..., 2^20).
  std::vector<double> n_ladder;
  std::uint64_t horizon = 200;
  /// Period of zeta; 0 means generic (candidates 0, 1, 2, ...).
  int period = 0;
  int max_q = 32;
};

struct ChooseQResult {
  int q = 0;
  /// Return-time profile per candidate j: one entry per ladder n
  /// (nullopt = none within horizon).
  std::vector<std::pair<int, std::vector<std::optional<std::uint64_t>>>> profile;
};

/// q' = p * ceil((log tau_hi - log tau_lo) / log|det DT^p|).
int q_prime(int period, double tau_lo, double tau_hi, double log_det);

/// Smallest admissible j: the return time of A_n^(j) is nondecreasing
/// along the ladder and grows by at least 2 (or leaves the horizon).
/// Throws DomainError with the profile when no j <= max_q qualifies.
ChooseQResult choose_q(const SystemSpec& spec, const ObservableSpec& obs,
                       const ChooseQOptions& opt);

/// n * sum_{j=1}^{floor(n/k_n)-1} mu(A^(q) n T^{-j} A^(q)), exact.
Rational dprime_diagnostic(const SystemSpec& spec, const RationalIntervalUnion& a_n, int q,
                           std::uint64_t n, std::uint64_t k_n);

/// mu(I n T^{-j} B) for the digit-shift map x -> b x, any j >= 0.
Rational shift_overlap(int base, const RationalIntervalUnion& a, const RationalIntervalUnion& b,
                       int j);

// ---------------------------------------------------------------------------
// Clusters

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// Exceedance counts of one run (used for ratio-estimator errors).
struct RunTotals {
  std::uint64_t exceedances = 0;
  std::uint64_t clusters = 0;
  std::uint64_t aq_hits = 0;
};

struct ClusterSummary {
  std::vector<double> start_times;
  std::vector<std::uint64_t> sizes;
  std::vector<std::vector<double>> marks;
  std::vector<RunTotals> runs;
  std::uint64_t q = 0;
  Estimate theta_aq;        // A^(q)-ratio estimator
  Estimate theta_clusters;  // cluster count / exceedance count

  std::uint64_t exceedances() const;
  /// Appends another summary (same q); call finalize() afterwards.
  void merge(const ClusterSummary& other);
  void finalize();
  nlohmann::json to_json(bool with_clusters = true) const;
};

/// Groups exceedance indices (sorted) with gaps <= q. Indices >= length
/// are look-ahead: they never start clusters but decide A^(q) membership.
ClusterSummary clusters(std::span<const std::uint64_t> exceedances, std::span<const double> marks,
                        std::uint64_t q, std::uint64_t length, double n);

/// Clusters of the visits with marks below tau.
ClusterSummary clusters_from_hits(const OrbitHits& hits, double tau, std::uint64_t q);

// ---------------------------------------------------------------------------
// Void probabilities

struct VoidEstimate {
  std::uint64_t runs = 0;
  std::uint64_t voids = 0;
  double p = 0.0;
  double lo = 0.0;  // Wilson 95%
  double hi = 0.0;
};

VoidEstimate wilson(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

VoidEstimate void_frequency(const std::vector<PointMeasure>& ensemble, const RectangleFamily& fam);

/// Counts atoms of cell k that are A^(q)_k atoms: no atom of the same
/// mark set within the next q steps (time step 1/n).
std::vector<std::uint64_t> count_in_aq(const PointMeasure& pm, const RectangleFamily& fam,
                                       std::uint64_t q, double n);

VoidEstimate void_frequency_aq(const std::vector<PointMeasure>& ensemble,
                               const RectangleFamily& fam, std::uint64_t q, double n);

}  // namespace repp
