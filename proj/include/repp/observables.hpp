// Observables phi = g(dist(x, zeta)), exceedance sets, and threshold
// schemes u_n(tau) with their inverses.
//
// ObservableSpec key-value grammar:
//   g    = g1 | g2 | g3 | two_site
//   zeta = point, e.g. 0 | 0,0 | pi/16     (two_site fixes zeta = pi/16)
//   a    = exponent for g2, g3 (default 1)
//   c    = constant for g3 (default 1)
#pragma once

#include "repp/exact_real.hpp"
#include "repp/interval_set.hpp"
#include "repp/kv.hpp"
#include "repp/systems.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace repp {

enum class GKind { G1, G2, G3, TwoSite };

std::string to_string(GKind k);

struct ObservableSpec {
  std::vector<ExactReal> zeta;
  GKind g = GKind::G1;
  double a = 1.0;
  double c = 1.0;

  static ObservableSpec g1(std::vector<ExactReal> zeta);
  static ObservableSpec g2(std::vector<ExactReal> zeta, double a);
  static ObservableSpec g3(std::vector<ExactReal> zeta, double a, double c);
  /// phi(x) = max{0, 1 - 100|x - pi/16|} + max{0, 1 - 10|x - 3pi/16|}.
  static ObservableSpec two_site();

  int dimension() const { return static_cast<int>(zeta.size()); }

  /// Points where phi is maximised locally (one per tent / ball).
  std::vector<std::vector<ExactReal>> sites() const;

  /// Throws ConfigError unless g is strictly decreasing near 0.
  void validate() const;

  /// g(y) and its inverse g^{-1}(u) = sup{y : g(y) > u} for one site.
  double g_of(double y) const;
  double g_inverse(double u) const;

  KeyValueBlock to_kv() const;
  static ObservableSpec from_kv(const KeyValueBlock& kv);
};

/// Distance on the flat torus R^d/Z^d.
double torus_distance(const std::vector<double>& x, const std::vector<double>& y);

double evaluate(const ObservableSpec& obs, const std::vector<double>& x);

/// {phi > u} as a union of circle balls (one-dimensional observables).
IntervalUnion exceedance_set(const ObservableSpec& obs, double u);

/// Radius of the ball {phi > u} around each site (empty balls give 0).
std::vector<double> exceedance_radii(const ObservableSpec& obs, double u);

/// Empirical ball measures mu(B_r(zeta)) from one calibration orbit.
class BallMeasureTable {
 public:
  BallMeasureTable() = default;
  BallMeasureTable(std::vector<double> sorted_distances, std::uint64_t orbit_length);

  std::uint64_t orbit_length() const { return length_; }
  /// Fraction of orbit points within distance r; nondecreasing in r.
  double measure(double r) const;
  double standard_error(double r) const;
  /// Smallest radius with at least one visit; used when a requested
  /// radius had none.
  double smallest_visited_radius() const;
  /// Radius r with measure(r) = mass, interpolating linearly between
  /// sampled distances. Sets `warning` when mass is below the first visit.
  double radius_for(double mass, std::string* warning = nullptr) const;
  bool empty() const { return distances_.empty(); }

 private:
  std::vector<double> distances_;
  std::uint64_t length_ = 0;
};

/// Orbit of length m from a seeded random start; ball measures at zeta.
/// Requires m >= 10^5.
BallMeasureTable calibrate_birkhoff(const SystemSpec& spec, const ObservableSpec& obs,
                                    std::uint64_t m, std::uint64_t seed);

enum class MeasureModel { AnalyticDensity, BirkhoffEmpirical };

class ThresholdScheme {
 public:
  /// mu(B_r(site)) = density * V_d * r^d, exact for Lebesgue-preserving maps.
  static ThresholdScheme analytic(const ObservableSpec& obs, double n, double density = 1.0);
  static ThresholdScheme birkhoff(const ObservableSpec& obs, double n,
                                  std::optional<BallMeasureTable> table);

  double n() const { return n_; }
  MeasureModel model() const { return model_; }
  const ObservableSpec& observable() const { return obs_; }

  /// u_n(tau): n * mu(phi > u) = tau.
  double threshold(double tau) const;
  /// u_n^{-1}(z) = n * mu(phi > z).
  double tau_of(double z) const;

  /// Mark of a point at distance rho from site s: n * mu(B_rho(site)),
  /// weighted as the observable weights that site.
  double mark_of_distance(int site, double rho) const;
  /// Radius around site s whose points carry marks below tau.
  double radius(double tau, int site = 0) const;
  /// Exact radius tau / kappa_s for one-dimensional analytic schemes with
  /// rational density.
  Rational radius_exact(const Rational& tau, int site = 0) const;

  /// {x : mark(x) in tau_set} for one-dimensional analytic schemes, as an
  /// exact union of annuli around the sites.
  RationalIntervalUnion band_preimage(const RationalIntervalUnion& tau_set) const;

  /// Scale c with normalised offset = (x - zeta) * c for multi-dimensional
  /// REPPs: 1 / (g^{-1}(u_n(1)) * |B_1|^{1/d}).
  double chart_scale() const;

 private:
  ObservableSpec obs_;
  double n_ = 1.0;
  MeasureModel model_ = MeasureModel::AnalyticDensity;
  double density_ = 1.0;
  std::optional<BallMeasureTable> table_;
  // Linear factor per site: mark = kappa_s * rho^d under the analytic model.
  std::vector<double> kappa_;
};

/// Volume of the Euclidean unit ball in dimension d.
double unit_ball_volume(int d);

}  // namespace repp
