// Samplers for the limiting point processes and their analytic void
// probabilities and intensities.
#pragma once

#include "repp/nu.hpp"
#include "repp/point_measure.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace repp {

enum class LawKind {
  Poisson2D,
  CompoundPoisson1D,
  StackedGeometric,
  PoissonMultiD,
  StackedLinear,
  NDag,
  HatN,
  DoubleHatN
};

std::string to_string(LawKind k);

struct LimitLaw {
  LawKind kind = LawKind::Poisson2D;
  double theta = 1.0;
  double alpha = 2.0;
  int d = 1;
  /// DT_zeta^p for StackedLinear and NDag.
  Eigen::MatrixXd matrix;
  int period = 1;
  /// CompoundPoisson1D: tau of the underlying threshold.
  double tau = 1.0;
  double beta_plus = 2.0;
  double big_theta = 23.0 / 33.0;
  double p_z1 = 3.0 / 23.0;
  double ratio = 0.3;

  static LimitLaw poisson2d();
  static LimitLaw compound1d(double theta, double tau);
  /// theta = 1 - alpha^{-d}.
  static LimitLaw stacked_geometric(double alpha, int d);
  static LimitLaw poisson_multi(int d);
  /// theta = 1 - 1/|det DT|.
  static LimitLaw stacked_linear(Eigen::MatrixXd dt, int period = 1);
  static LimitLaw ndag(Eigen::MatrixXd dt, int period = 1);
  /// theta = 1 - 1/(2 beta+), P(Z = 1) = 1/(2 theta).
  static LimitLaw hat_n(double beta_plus);
  static LimitLaw double_hat_n();

  /// Throws DomainError on inconsistent parameters.
  void validate() const;
  /// Dimension of the marks of sampled measures.
  int mark_dim() const;
  /// Outer measure whose void probabilities the law realises.
  OuterMeasureSpec outer_measure() const;

  nlohmann::json to_json() const;
  static LimitLaw from_json(const nlohmann::json& j);
};

PointMeasure sample_poisson2d(const Window& w, std::uint64_t seed);
PointMeasure sample_stacked_geometric(const LimitLaw& law, const Window& w, std::uint64_t seed);
/// Event times with Exp(theta*tau) gaps; marks are Geometric(theta) multiplicities.
PointMeasure sample_compound1d(double theta, double tau, const Window& w, std::uint64_t seed);
/// PoissonMultiD or StackedLinear; w.mark_cap is the spatial window radius.
PointMeasure sample_multid(const LimitLaw& law, const Window& w, std::uint64_t seed);
PointMeasure sample_ndag(const LimitLaw& law, const Window& w, std::uint64_t seed);
PointMeasure sample_hat_n(double beta_plus, const Window& w, std::uint64_t seed);
PointMeasure sample_double_hat_n(const Window& w, std::uint64_t seed);

/// Dispatches on law.kind.
PointMeasure sample(const LimitLaw& law, const Window& w, std::uint64_t seed);

/// prod_k exp(-nu(A_k) |J_k|); for CompoundPoisson1D the mark sets are
/// ignored and nu(A_k) is replaced by theta * tau.
double analytic_void(const LimitLaw& law, const RectangleFamily& fam);
double analytic_void(const OuterMeasureSpec& nu, const RectangleFamily& fam);

/// Expected count of the cell: Leb(cell) (tau |J| summed multiplicities
/// for CompoundPoisson1D).
double expected_count(const LimitLaw& law, const Cell& cell);

/// Sum of multiplicities of a compound measure inside each time interval.
std::vector<std::uint64_t> compound_counts(const PointMeasure& pm, const RectangleFamily& fam);

}  // namespace repp
