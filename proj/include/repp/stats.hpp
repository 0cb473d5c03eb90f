// Goodness-of-fit tests turning ensembles into pass/fail reports against
// analytic laws.
#pragma once

#include "repp/empirical.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace repp {

constexpr double kDefaultLevel = 0.01;

struct GofReport {
  std::string test;
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  double level = kDefaultLevel;
  bool reject = false;
  std::uint64_t samples = 0;
  std::string reference;

  bool pass() const { return !reject; }
  nlohmann::json to_json() const;
  static GofReport from_json(const nlohmann::json& j);
};

/// Per-cell significance level for m simultaneous comparisons.
double bonferroni_level(double level, std::size_t m);
/// Two-sided normal quantile z with P(|Z| > z) = level.
double two_sided_z(double level);

/// Pearson chi-square of a histogram (counts[k] = number of draws equal to
/// k + offset) against pmf(k + offset), merging adjacent cells until every
/// expected count is at least 5; the unbounded tail joins the last cell.
GofReport chi_square_pmf(std::span<const std::uint64_t> counts,
                         const std::function<double(std::uint64_t)>& pmf, std::uint64_t offset,
                         const std::string& reference, double level = kDefaultLevel);

GofReport chi_square_poisson(std::span<const std::uint64_t> counts, double mean,
                             double level = kDefaultLevel);

/// Histogram of raw draws: result[k] = #{x == k}.
std::vector<std::uint64_t> histogram(std::span<const std::uint64_t> draws);

/// Cluster sizes against theta (1 - theta)^(k - 1), k >= 1.
GofReport geometric_fit(std::span<const std::uint64_t> sizes, double theta,
                        double level = kDefaultLevel);

/// Kolmogorov distribution tail P(K > x).
double kolmogorov_tail(double x);

/// One-sample Kolmogorov-Smirnov test of gaps against Exp(rate).
GofReport ks_exponential(std::span<const double> gaps, double rate, double level = kDefaultLevel);

/// Two-sided test of an observed void frequency against its analytic value:
/// a normal z-test, or the exact binomial test when the normal
/// approximation is poor.
GofReport compare_void(const VoidEstimate& empirical, double analytic,
                       double level = kDefaultLevel);

/// z-test of a sample mean (with its standard error) against a reference.
GofReport compare_mean(double mean, double se, std::uint64_t samples, double reference,
                       double level = kDefaultLevel);

/// Sample mean and standard error of the mean.
Estimate mean_and_se(std::span<const double> xs);

}  // namespace repp
