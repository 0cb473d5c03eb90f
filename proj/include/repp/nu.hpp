// The clustering outer measure nu on interval and box unions.
#pragma once

#include "repp/box_union.hpp"
#include "repp/interval_set.hpp"
#include "repp/observables.hpp"
#include "repp/systems.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace repp {

enum class NuKind { Lebesgue, ContractionGeometric, LinearFamily, Mixture };

std::string to_string(NuKind k);

/// One term of a two-term mixture: weight * |A \ scale*A|, or weight * |A|
/// when scale == 0 (identity term).
struct MixtureTerm {
  double weight = 1.0;
  double scale = 0.0;
};

struct OuterMeasureSpec {
  NuKind kind = NuKind::Lebesgue;
  /// ContractionGeometric: nu(A) = |A \ U_{j>=1} lambda^j A|.
  double lambda = 0.5;
  /// LinearFamily: nu(G) = |G \ U_{j>=1} M^j G| with M = DT^{-p}.
  Eigen::MatrixXd m;
  /// LinearFamily on scalar marks: marks s stand for the radial set
  /// {v in R^2 : pi |v|^2 in A}.
  bool radial = false;
  std::vector<MixtureTerm> terms;

  static OuterMeasureSpec lebesgue();
  static OuterMeasureSpec contraction(double lambda);
  static OuterMeasureSpec linear(Eigen::MatrixXd m, bool radial = false);
  static OuterMeasureSpec mixture(MixtureTerm first, MixtureTerm second);

  void validate() const;
  nlohmann::json to_json() const;
  static OuterMeasureSpec from_json(const nlohmann::json& j);
};

/// nu on scalar-mark sets (bounded unions in [0, inf)).
double nu_eval(const OuterMeasureSpec& spec, const IntervalUnion& a);
/// Exact nu for Lebesgue and rational contractions.
Rational nu_eval_exact(const OuterMeasureSpec& spec, const RationalIntervalUnion& a,
                       const Rational& lambda);
/// nu on box unions in R^d (Lebesgue or LinearFamily).
double nu_eval(const OuterMeasureSpec& spec, const BoxUnion& g);

struct McEstimate {
  double value = 0.0;
  double sigma = 0.0;
  std::uint64_t samples = 0;
};

/// Uniform rejection estimate over the bounding box of a; samples >= 10^4.
McEstimate nu_monte_carlo(const OuterMeasureSpec& spec, const IntervalUnion& a,
                          std::uint64_t samples, std::uint64_t seed);
McEstimate nu_monte_carlo(const OuterMeasureSpec& spec, const BoxUnion& g, std::uint64_t samples,
                          std::uint64_t seed);

/// n * |A_n^(q)| where A_n is the set of points whose marks fall in `a`.
Rational empirical_nu(const SystemSpec& spec, const ThresholdScheme& ts,
                      const RationalIntervalUnion& a, int q);

/// Area of the union of convex polygons in the plane (vertex lists).
double polygon_union_area(const std::vector<std::vector<Eigen::Vector2d>>& polygons);

}  // namespace repp
