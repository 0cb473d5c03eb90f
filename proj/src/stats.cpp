#include "repp/stats.hpp"

#include "repp/errors.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace repp {

namespace {

constexpr double kMinExpected = 5.0;

GofReport decide(GofReport r) {
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  r.reject = r.p_value < r.level;
  return r;
}

double normal_two_sided_p(double z) {
  return 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(), std::abs(z)));
}

}  // namespace

nlohmann::json GofReport::to_json() const {
  return {{"test", test},       {"statistic", statistic}, {"dof", dof},
          {"p_value", p_value}, {"level", level},         {"reject", reject},
          {"samples", samples}, {"reference", reference}};
}

GofReport GofReport::from_json(const nlohmann::json& j) {
  GofReport r;
  r.test = j.at("test");
  r.statistic = j.at("statistic");
  r.dof = j.at("dof");
  r.p_value = j.at("p_value");
  r.level = j.at("level");
  r.reject = j.at("reject");
  r.samples = j.at("samples");
  r.reference = j.at("reference");
  return r;
}

double bonferroni_level(double level, std::size_t m) {
  if (m == 0) throw DomainError("Bonferroni correction needs at least one comparison");
  return level / static_cast<double>(m);
}

double two_sided_z(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
  return boost::math::quantile(boost::math::complement(boost::math::normal(), level / 2.0));
}

GofReport chi_square_pmf(std::span<const std::uint64_t> counts,
                         const std::function<double(std::uint64_t)>& pmf, std::uint64_t offset,
                         const std::string& reference, double level) {
  GofReport r;
  r.test = "chi_square";
  r.reference = reference;
  r.level = level;
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  r.samples = static_cast<std::uint64_t>(total);
  if (r.samples == 0) throw UnderpoweredError("chi-square test needs at least one draw");

  std::vector<double> obs;
  std::vector<double> exp;
  double o = 0.0;
  double e = 0.0;
  double mass = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double p = pmf(k + offset);
    mass += p;
    o += static_cast<double>(counts[k]);
    e += total * p;
    if (e >= kMinExpected) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  // Tail beyond the last observed value.
  e += total * std::max(0.0, 1.0 - mass);
  if (obs.empty()) {
    obs.push_back(o);
    exp.push_back(e);
  } else {
    obs.back() += o;
    exp.back() += e;
  }

  if (obs.size() == 1) {
    // One cell is only meaningful when the law itself is a point mass.
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (pmf(k + offset) < 1.0 - 1e-12) continue;
      r.statistic = total - static_cast<double>(counts[k]);
      r.p_value = r.statistic == 0.0 ? 1.0 : 0.0;
      return decide(r);
    }
    throw UnderpoweredError("too few draws for a chi-square test after tail merging");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp[i] <= 0.0) {
      if (obs[i] > 0.0) stat = std::numeric_limits<double>::infinity();
      continue;
    }
    stat += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  r.statistic = stat;
  r.dof = static_cast<double>(obs.size() - 1);
  r.p_value = std::isfinite(stat) ? boost::math::cdf(boost::math::complement(
                                        boost::math::chi_squared(r.dof), stat))
                                  : 0.0;
  return decide(r);
}

GofReport chi_square_poisson(std::span<const std::uint64_t> counts, double mean, double level) {
  if (!(mean >= 0.0)) throw DomainError("Poisson mean must be non-negative");
  auto pmf = [mean](std::uint64_t k) {
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    return boost::math::pdf(boost::math::poisson(mean), static_cast<double>(k));
  };
  GofReport r = chi_square_pmf(counts, pmf, 0, "poisson(" + std::to_string(mean) + ")", level);
  r.test = "chi_square_poisson";
  return r;
}

std::vector<std::uint64_t> histogram(std::span<const std::uint64_t> draws) {
  std::vector<std::uint64_t> h;
  for (auto x : draws) {
    if (x >= h.size()) h.resize(x + 1, 0);
    ++h[x];
  }
  return h;
}

GofReport geometric_fit(std::span<const std::uint64_t> sizes, double theta, double level) {
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0, 1]");
  std::vector<std::uint64_t> h;
  for (auto s : sizes) {
    if (s == 0) throw DataError("cluster sizes must be positive");
    if (s > h.size()) h.resize(s, 0);
    ++h[s - 1];
  }
  auto pmf = [theta](std::uint64_t k) {
    if (theta == 1.0) return k == 1 ? 1.0 : 0.0;
    return theta * std::pow(1.0 - theta, static_cast<double>(k - 1));
  };
  GofReport r = chi_square_pmf(h, pmf, 1, "geometric(" + std::to_string(theta) + ")", level);
  r.test = "geometric_fit";
  return r;
}

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // Theta-function form, fast for small x.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      s += std::exp(-odd * odd * pi2 / (8.0 * x * x));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

GofReport ks_exponential(std::span<const double> gaps, double rate, double level) {
  if (!(rate > 0.0)) throw DomainError("rate must be positive");
  if (gaps.size() < 100) throw UnderpoweredError("KS test needs at least 100 gaps");
  std::vector<double> x(gaps.begin(), gaps.end());
  for (double g : x)
    if (!(g > 0.0)) throw DataError("gaps must be positive");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = -std::expm1(-rate * x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  GofReport r;
  r.test = "ks_exponential";
  r.reference = "exponential(" + std::to_string(rate) + ")";
  r.level = level;
  r.samples = x.size();
  r.statistic = d;
  const double sn = std::sqrt(n);
  r.p_value = kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d);
  return decide(r);
}

GofReport compare_void(const VoidEstimate& empirical, double analytic, double level) {
  if (!(analytic >= 0.0 && analytic <= 1.0)) throw DomainError("analytic probability must lie in [0,1]");
  if (empirical.runs == 0) throw UnderpoweredError("void comparison needs at least one run");
  GofReport r;
  r.level = level;
  r.samples = empirical.runs;
  r.reference = std::to_string(analytic);
  const double n = static_cast<double>(empirical.runs);
  const double k = static_cast<double>(empirical.voids);
  const double var = analytic * (1.0 - analytic) * n;
  if (var >= 10.0) {
    r.test = "void_z";
    r.statistic = (k - n * analytic) / std::sqrt(var);
    r.p_value = normal_two_sided_p(r.statistic);
    return decide(r);
  }
  r.test = "void_exact_binomial";
  r.statistic = k;
  if (analytic == 0.0 || analytic == 1.0) {
    r.p_value = (k == n * analytic) ? 1.0 : 0.0;
    return decide(r);
  }
  const boost::math::binomial bin(n, analytic);
  const double lower = boost::math::cdf(bin, k);
  const double upper = k > 0.0 ? boost::math::cdf(boost::math::complement(bin, k - 1.0)) : 1.0;
  r.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
  return decide(r);
}

GofReport compare_mean(double mean, double se, std::uint64_t samples, double reference,
                       double level) {
  GofReport r;
  r.test = "mean_z";
  r.level = level;
  r.samples = samples;
  r.reference = std::to_string(reference);
  if (!(se > 0.0)) {
    r.statistic = 0.0;
    r.p_value = std::abs(mean - reference) <= 1e-12 * std::max(1.0, std::abs(reference)) ? 1.0 : 0.0;
    return decide(r);
  }
  r.statistic = (mean - reference) / se;
  r.p_value = normal_two_sided_p(r.statistic);
  return decide(r);
}

Estimate mean_and_se(std::span<const double> xs) {
  if (xs.empty()) return {};
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double n = static_cast<double>(xs.size());
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace repp
