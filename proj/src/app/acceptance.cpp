#include "repp/acceptance.hpp"

#include "repp/battery.hpp"
#include "repp/commands.hpp"
#include "repp/ensemble.hpp"
#include "repp/errors.hpp"
#include "repp/extremal.hpp"
#include "repp/report.hpp"
#include "repp/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace repp {

namespace fs = std::filesystem;

namespace {

// Family-wise level of a two-sided 3 sigma criterion.
constexpr double kThreeSigmaLevel = 0.0026997960632601866;

// Shared doubling-map ensemble.
constexpr double kDoublingN = 1e6;
constexpr std::size_t kDoublingRuns = 10000;
constexpr double kDoublingCap = 10.0;
constexpr std::uint64_t kLookahead = 64;

// Criterion tolerances.
constexpr double kTheta1Lo = 0.48, kTheta1Hi = 0.52;
constexpr double kTheta2Lo = 0.647, kTheta2Hi = 0.687;
constexpr double kTheta3Lo = 0.81, kTheta3Hi = 0.86;
constexpr double kTheta11Lo = 0.89, kTheta11Hi = 0.93;
constexpr double kSize2Lo = 0.08, kSize2Hi = 0.12;
constexpr double kRuntimeBudget = 60.0;
constexpr double kGofLevel = 0.01;
constexpr double kGridPassFraction = 0.95;
constexpr double kStackRatioTol = 1e-3;
constexpr double kStackDistance = 0x1.0p-20;
constexpr double kFddTol = 0.01;
constexpr double kRecordMeanTol = 0.1;
constexpr double kNuRelTol = 1e-6;
constexpr double kExcessSigmas = 3.0;

const std::vector<ExactReal> kOrigin{ExactReal::rational(0)};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

OrbitRunConfig orbit_config(SystemSpec spec, const ObservableSpec& obs, double n, double cap) {
  OrbitRunConfig cfg{std::move(spec), ThresholdScheme::analytic(obs, n)};
  cfg.mark_cap = cap;
  cfg.lookahead = kLookahead;
  return cfg;
}

std::vector<OrbitHits> run_hits(const OrbitRunConfig& cfg, std::size_t first, std::size_t count, std::uint64_t seed,
                                 unsigned workers) {
  return run_ensemble(count, [&](std::size_t i) { return run_orbit(cfg, derive_seed(seed, first + i)); }, workers);
}

ClusterSummary cluster_all(const std::vector<OrbitHits>& hits, std::size_t count, double tau, std::uint64_t q) {
  ClusterSummary all;
  all.q = q;
  for (std::size_t r = 0; r < count; ++r) all.merge(clusters_from_hits(hits[r], tau, q));
  all.finalize();
  return all;
}

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

nlohmann::json estimate_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

std::string theta_details(const ClusterSummary& s, double lo, double hi) {
  return "theta_aq " + fmt("%.4f", s.theta_aq.value) + " +- " + fmt("%.4f", s.theta_aq.se) + ", theta_clusters " +
         fmt("%.4f", s.theta_clusters.value) + " +- " + fmt("%.4f", s.theta_clusters.se) + " in [" + fmt("%g", lo) +
         ", " + fmt("%g", hi) + "]";
}

CriterionResult theta_result(int id, std::string name, const ClusterSummary& s, double lo, double hi,
                             double seconds) {
  CriterionResult c;
  c.id = id;
  c.name = std::move(name);
  const bool inside = in_range(s.theta_aq.value, lo, hi) && in_range(s.theta_clusters.value, lo, hi);
  c.pass = inside && seconds < kRuntimeBudget;
  c.details = theta_details(s, lo, hi) + (seconds < kRuntimeBudget ? "" : ", runtime over budget");
  c.data = {{"theta_aq", estimate_json(s.theta_aq)},
            {"theta_clusters", estimate_json(s.theta_clusters)},
            {"clusters", s.sizes.size()},
            {"exceedances", s.exceedances()}};
  return c;
}

/// Void grid of an orbit ensemble against an outer measure, one family
/// per cell at the Bonferroni-corrected level.
GofReport orbit_void_grid(const std::vector<OrbitHits>& hits, std::size_t count, const OuterMeasureSpec& nu,
                          nlohmann::json& data) {
  std::vector<PointMeasure> ens;
  ens.reserve(count);
  for (std::size_t r = 0; r < count; ++r) ens.push_back(repp2_from_hits(hits[r]));
  const auto fams = standard_grid();
  const auto tally = tally_grid(ens, fams, false);
  std::vector<double> analytic;
  for (const auto& f : fams) analytic.push_back(analytic_void(nu, f));
  const auto cells = void_reports(tally, analytic, bonferroni_level(kGofLevel, fams.size()), "void");
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : cells) j.push_back(c.to_json());
  data["cells"] = j;
  return grid_verdict("void_grid", cells, kGridPassFraction);
}

RationalIntervalUnion to_rational(const IntervalUnion& u) {
  std::vector<Interval<Rational>> parts;
  for (const auto& p : u) parts.push_back({Rational(p.lo), Rational(p.hi)});
  return RationalIntervalUnion(parts);
}

IntervalUnion random_union(Engine& eng) {
  const int pieces = 1 + static_cast<int>(eng() % 4);
  std::vector<double> ends;
  for (int i = 0; i < 2 * pieces; ++i) ends.push_back(uniform(eng, 0.0, 10.0));
  std::sort(ends.begin(), ends.end());
  std::vector<Interval<double>> parts;
  for (int i = 0; i < pieces; ++i) parts.push_back({ends[2 * i], ends[2 * i + 1]});
  return IntervalUnion(parts);
}

class Suite {
 public:
  Suite(const AcceptanceOptions& opt, std::ostream& log) : opt_(opt), log_(log) {}

  bool wanted(int id) const { return opt_.only.empty() || opt_.only.count(id) > 0; }

  void record(CriterionResult c, const Clock& clock) {
    c.seconds = clock.seconds();
    log_ << c.line() << std::endl;
    results_.push_back(std::move(c));
  }

  std::uint64_t seed(std::uint64_t stream) const { return derive_seed(opt_.seed, stream); }

  /// Doubling-map hits at zeta = 0, n = 10^6; runs [0, count) are
  /// generated on first use and shared by criteria 1, 4, 5, 6, 9 and 13.
  const std::vector<OrbitHits>& doubling(std::size_t count) {
    if (doubling_.size() < count) {
      const auto cfg = orbit_config(SystemSpec::digit_shift({2}), ObservableSpec::g1(kOrigin), kDoublingN, kDoublingCap);
      auto more = run_hits(cfg, doubling_.size(), count - doubling_.size(), seed(1), opt_.workers);
      for (auto& h : more) doubling_.push_back(std::move(h));
    }
    return doubling_;
  }

  std::vector<CriterionResult> run() {
    const std::vector<std::pair<int, std::function<CriterionResult()>>> criteria{
        {1, [&] { return c1(); }},  {2, [&] { return c2(); }},   {3, [&] { return c3(); }},
        {4, [&] { return c4(); }},  {5, [&] { return c5(); }},   {6, [&] { return c6(); }},
        {7, [&] { return c7(); }},  {8, [&] { return c8(); }},   {9, [&] { return c9(); }},
        {10, [&] { return c10(); }}, {11, [&] { return c11(); }}, {12, [&] { return c12(); }},
        {13, [&] { return c13(); }}, {14, [&] { return c14(); }}, {15, [&] { return c15(); }}};
    for (const auto& [id, fn] : criteria) {
      if (!wanted(id)) continue;
      Clock clock;
      CriterionResult c;
      try {
        c = fn();
      } catch (const std::exception& e) {
        c.id = id;
        c.pass = false;
        c.details = std::string("error: ") + e.what();
      }
      c.id = id;
      record(std::move(c), clock);
    }
    return results_;
  }

 private:
  CriterionResult c1() {
    Clock clock;
    const auto& hits = doubling(2000);
    const auto s = cluster_all(hits, 2000, kDoublingCap, 1);
    return theta_result(1, "extremal index, doubling map", s, kTheta1Lo, kTheta1Hi, clock.seconds());
  }

  CriterionResult c2() {
    Clock clock;
    const auto cfg = orbit_config(SystemSpec::digit_shift({3}), ObservableSpec::g1(kOrigin), 1e6, kDoublingCap);
    const auto hits = run_hits(cfg, 0, 2000, seed(2), opt_.workers);
    const auto s = cluster_all(hits, hits.size(), kDoublingCap, 1);
    return theta_result(2, "extremal index, tripling map", s, kTheta2Lo, kTheta2Hi, clock.seconds());
  }

  CriterionResult c3() {
    Clock clock;
    const std::vector<ExactReal> origin{ExactReal::rational(0), ExactReal::rational(0)};
    const auto cfg = orbit_config(SystemSpec::digit_shift({2, 3}), ObservableSpec::g1(origin), 1e6, kDoublingCap);
    const auto hits = run_hits(cfg, 0, 2000, seed(3), opt_.workers);
    const auto s = cluster_all(hits, hits.size(), kDoublingCap, 1);
    return theta_result(3, "extremal index, torus map diag(2,3)", s, kTheta3Lo, kTheta3Hi, clock.seconds());
  }

  CriterionResult c4() {
    const auto& hits = doubling(kDoublingRuns);
    const auto s = cluster_all(hits, kDoublingRuns, kDoublingCap, 1);
    const auto r = geometric_fit(s.sizes, 0.5, kGofLevel);
    CriterionResult c;
    c.name = "geometric cluster sizes";
    c.pass = r.pass() && s.sizes.size() >= 10000;
    c.details = std::to_string(s.sizes.size()) + " clusters, chi2 " + fmt("%.2f", r.statistic) + " on " +
                fmt("%.0f", r.dof) + " dof, p " + fmt("%.4f", r.p_value) + " > " + fmt("%g", kGofLevel);
    c.data = r.to_json();
    return c;
  }

  CriterionResult c5() {
    const auto& hits = doubling(5000);
    CriterionResult c;
    c.name = "void-probability grid, doubling map";
    const auto v = orbit_void_grid(hits, 5000, OuterMeasureSpec::contraction(0.5), c.data);
    c.pass = v.pass();
    c.details = v.reference + " at level " + fmt("%.1e", bonferroni_level(kGofLevel, 20));
    return c;
  }

  CriterionResult c6() {
    const auto& hits = doubling(kDoublingRuns);
    std::size_t pairs = 0;
    double worst = 0.0;
    for (const auto& h : hits)
      for (std::size_t i = 0; i + 1 < h.size(); ++i) {
        if (h.index[i + 1] != h.index[i] + 1) continue;
        const double distance = h.mark[i] / (2.0 * h.n);
        if (!(distance < kStackDistance) || h.mark[i] <= 0.0) continue;
        worst = std::max(worst, std::abs(h.mark[i + 1] / h.mark[i] / 2.0 - 1.0));
        ++pairs;
      }
    CriterionResult c;
    c.name = "stack ratio";
    c.pass = pairs > 0 && worst < kStackRatioTol;
    c.details = std::to_string(pairs) + " consecutive pairs, max relative error " + fmt("%.3e", worst) + " < " +
                fmt("%g", kStackRatioTol);
    c.data = {{"pairs", pairs}, {"max_relative_error", worst}};
    return c;
  }

  CriterionResult c7() {
    Eigen::MatrixXd d23 = Eigen::MatrixXd::Zero(2, 2);
    d23(0, 0) = 2.0;
    d23(1, 1) = 3.0;
    const std::vector<LimitLaw> laws{LimitLaw::poisson2d(),         LimitLaw::compound1d(0.5, 1.0),
                                     LimitLaw::stacked_geometric(2.0, 1), LimitLaw::poisson_multi(2),
                                     LimitLaw::stacked_linear(d23),  LimitLaw::ndag(d23),
                                     LimitLaw::hat_n(2.0),           LimitLaw::double_hat_n()};
    const std::uint64_t samples = 100000;
    std::size_t tests = 0;
    std::vector<std::vector<RectangleFamily>> grids;
    std::vector<Window> windows;
    for (const auto& law : laws) {
      const Window w{1.0, law.mark_dim() == 1 ? 10.0 : 3.0};
      windows.push_back(w);
      grids.push_back(grid_for(law.mark_dim(), w));
      tests += 2 * grids.back().size();
    }
    const double level = bonferroni_level(kThreeSigmaLevel, tests);
    CriterionResult c;
    c.name = "sampler self-consistency";
    std::size_t failed = 0;
    nlohmann::json per_law = nlohmann::json::object();
    for (std::size_t i = 0; i < laws.size(); ++i) {
      const auto check = check_law_grid(laws[i], windows[i], grids[i], samples, seed(700 + i), level, opt_.workers);
      std::size_t law_failed = 0;
      nlohmann::json cells = nlohmann::json::array();
      for (const auto* group : {&check.voids, &check.means})
        for (const auto& r : *group) {
          law_failed += r.pass() ? 0 : 1;
          cells.push_back(r.to_json());
        }
      failed += law_failed;
      per_law[to_string(laws[i].kind)] = {{"failed", law_failed}, {"cells", cells}};
    }
    c.pass = failed == 0;
    c.details = std::to_string(tests - failed) + "/" + std::to_string(tests) + " void and mean cells within " +
                "3 sigma family-wise (" + std::to_string(laws.size()) + " laws, " + std::to_string(samples) +
                " samples each)";
    c.data = per_law;
    return c;
  }

  CriterionResult c8() {
    Eigen::MatrixXd d23 = Eigen::MatrixXd::Zero(2, 2);
    d23(0, 0) = 2.0;
    d23(1, 1) = 3.0;
    const std::vector<std::pair<std::string, OuterMeasureSpec>> specs{
        {"lebesgue", OuterMeasureSpec::lebesgue()},
        {"contraction 1/2", OuterMeasureSpec::contraction(0.5)},
        {"contraction 2/3", OuterMeasureSpec::contraction(2.0 / 3.0)},
        {"radial diag(2,3)", LimitLaw::ndag(d23).outer_measure()},
        {"hat mixture", LimitLaw::hat_n(2.0).outer_measure()},
        {"double hat mixture", LimitLaw::double_hat_n().outer_measure()}};
    const std::size_t unions = 100;
    const std::uint64_t mc_samples = 20000;
    const double level = bonferroni_level(kThreeSigmaLevel, specs.size() * unions);
    std::size_t mc_failed = 0;
    nlohmann::json mc = nlohmann::json::object();
    for (std::size_t s = 0; s < specs.size(); ++s) {
      Engine eng(seed(800 + s));
      const auto results = run_ensemble(
          unions,
          [&](std::size_t u) {
            Engine local(derive_seed(seed(800 + s), u));
            const auto set = random_union(local);
            const double exact = nu_eval(specs[s].second, set);
            const auto est = nu_monte_carlo(specs[s].second, set, mc_samples, derive_seed(seed(850 + s), u));
            return compare_mean(est.value, est.sigma, est.samples, exact, level);
          },
          opt_.workers);
      std::size_t bad = 0;
      double worst_z = 0.0;
      for (const auto& r : results) {
        bad += r.pass() ? 0 : 1;
        worst_z = std::max(worst_z, std::abs(r.statistic));
      }
      mc_failed += bad;
      mc[specs[s].first] = {{"failed", bad}, {"max_abs_z", worst_z}};
    }

    const double n = std::ldexp(1.0, 20);
    const auto ts = ThresholdScheme::analytic(ObservableSpec::g1(kOrigin), n);
    const auto dbl = SystemSpec::digit_shift({2});
    const auto nu = OuterMeasureSpec::contraction(0.5);
    double worst_rel = 0.0;
    std::size_t sets = 0;
    for (const auto& fam : standard_grid())
      for (const auto& cell : fam.cells) {
        const auto& a = cell.marks;
        const double m = a.inf() > 0.0 ? a.inf() : a.intervals().front().hi / 2.0;
        const int q = static_cast<int>(std::ceil(std::log2(a.sup() / m))) + 1;
        const double emp = to_double(empirical_nu(dbl, ts, to_rational(a), q));
        const double exact = nu_eval(nu, a);
        worst_rel = std::max(worst_rel, std::abs(emp - exact) / exact);
        ++sets;
      }
    CriterionResult c;
    c.name = "outer measure";
    c.pass = mc_failed == 0 && worst_rel < kNuRelTol;
    c.details = std::to_string(specs.size() * unions - mc_failed) + "/" + std::to_string(specs.size() * unions) +
                " Monte-Carlo checks within 3 sigma family-wise; empirical nu on " + std::to_string(sets) +
                " grid sets, max relative error " + fmt("%.2e", worst_rel) + " < " + fmt("%g", kNuRelTol);
    c.data = {{"monte_carlo", mc}, {"empirical_max_relative_error", worst_rel}};
    return c;
  }

  CriterionResult c9() {
    const auto& hits = doubling(kDoublingRuns);
    std::vector<double> z;
    z.reserve(kDoublingRuns);
    for (std::size_t r = 0; r < kDoublingRuns; ++r) {
      const auto path = extremal_path(hits[r]);
      z.push_back(path.values.empty() ? path.initial : path.values.back());
    }
    double worst = 0.0, at = 0.0;
    nlohmann::json grid = nlohmann::json::array();
    for (int k = 1; k <= 50; ++k) {
      const double y = 0.2 * k;
      const auto above = std::count_if(z.begin(), z.end(), [&](double v) { return v >= y; });
      const double p = static_cast<double>(above) / static_cast<double>(z.size());
      const double err = std::abs(p - std::exp(-y / 2.0));
      if (err > worst) {
        worst = err;
        at = y;
      }
      grid.push_back({{"y", y}, {"empirical", p}, {"analytic", std::exp(-y / 2.0)}});
    }
    CriterionResult c;
    c.name = "extremal process marginal";
    c.pass = worst < kFddTol;
    c.details = "sup error " + fmt("%.4f", worst) + " at y = " + fmt("%.1f", at) + " < " + fmt("%g", kFddTol) +
                " over 50 levels, " + std::to_string(z.size()) + " runs";
    c.data = grid;
    return c;
  }

  CriterionResult c10() {
    const double n = 1e5, a = 0.05, b = 1.0;
    const auto dbl = SystemSpec::digit_shift({2});
    const auto runs = run_ensemble(
        10000,
        [&](std::size_t r) {
          const std::uint64_t k = 1 + derive_seed(seed(10), r) % ((1ULL << 40) - 1);
          const auto obs = ObservableSpec::g1(
              {ExactReal::pi_multiple(Rational(static_cast<long long>(k), static_cast<long long>(1ULL << 40)))});
          return record_run(dbl, obs, n, a, b, 400.0, derive_seed(seed(11), r));
        },
        opt_.workers);
    std::vector<std::uint64_t> counts;
    for (const auto& r : runs) counts.push_back(r.count);
    const auto reports = record_law_reports(counts, a, b, kGofLevel);
    std::vector<double> xs(counts.begin(), counts.end());
    const auto est = mean_and_se(xs);
    const double ref = std::log(b / a);
    CriterionResult c;
    c.name = "records without clustering";
    c.pass = std::abs(est.value - ref) <= kRecordMeanTol && reports[0].pass();
    c.details = "mean " + fmt("%.4f", est.value) + " vs log 20 = " + fmt("%.4f", ref) + " +- " +
                fmt("%g", kRecordMeanTol) + ", chi2 p " + fmt("%.4f", reports[0].p_value) + " > " +
                fmt("%g", kGofLevel);
    c.data = {{"mean", estimate_json(est)}, {"chi_square", reports[0].to_json()}};
    return c;
  }

  CriterionResult c11() {
    const auto tri = SystemSpec::digit_shift({3});
    const auto obs = ObservableSpec::two_site();
    const auto cfg = orbit_config(tri, obs, 1e6, kDoublingCap);
    const auto hits = run_hits(cfg, 0, 2000, seed(12), opt_.workers);
    const auto s = cluster_all(hits, hits.size(), kDoublingCap, 1);
    const auto twos = std::count(s.sizes.begin(), s.sizes.end(), 2);
    const double frac2 = s.sizes.empty() ? 0.0 : static_cast<double>(twos) / static_cast<double>(s.sizes.size());

    nlohmann::json grid;
    const auto v = orbit_void_grid(hits, hits.size(), LimitLaw::double_hat_n().outer_measure(), grid);

    const double n = 1e5, a = 0.05, b = 1.0;
    const auto recs = run_ensemble(
        4000, [&](std::size_t r) { return record_run(tri, obs, n, a, b, 400.0, derive_seed(seed(13), r)); },
        opt_.workers);
    std::vector<double> xs;
    for (const auto& r : recs) xs.push_back(static_cast<double>(r.count));
    const auto est = mean_and_se(xs);
    const double ref = std::log(b / a);
    const double z = (est.value - ref) / est.se;

    const bool theta_ok = in_range(s.theta_aq.value, kTheta11Lo, kTheta11Hi) &&
                          in_range(s.theta_clusters.value, kTheta11Lo, kTheta11Hi);
    const bool size_ok = in_range(frac2, kSize2Lo, kSize2Hi);
    CriterionResult c;
    c.name = "two-site battery";
    c.pass = theta_ok && size_ok && v.pass() && z > kExcessSigmas;
    c.details = theta_details(s, kTheta11Lo, kTheta11Hi) + "; size-2 fraction " + fmt("%.4f", frac2) + " in [" +
                fmt("%g", kSize2Lo) + ", " + fmt("%g", kSize2Hi) + "]; voids " + v.reference + "; record mean " +
                fmt("%.4f", est.value) + " vs " + fmt("%.4f", ref) + ", excess " + fmt("%.1f", z) + " sigma > " +
                fmt("%g", kExcessSigmas) + " (factor " + fmt("%.4f", est.value / ref) + ")";
    c.data = {{"theta_aq", estimate_json(s.theta_aq)},
              {"theta_clusters", estimate_json(s.theta_clusters)},
              {"size2_fraction", frac2},
              {"void_grid", grid},
              {"record_mean", estimate_json(est)},
              {"excess_sigmas", z}};
    return c;
  }

  CriterionResult c12() {
    const auto dbl = SystemSpec::digit_shift({2});
    std::vector<double> good, wrong;
    bool decreasing = true;
    for (int k = 10; k <= 16; ++k) {
      const std::uint64_t n = 1ULL << k;
      const auto ts = ThresholdScheme::analytic(ObservableSpec::g1(kOrigin), static_cast<double>(n));
      const auto a = ts.band_preimage(RationalIntervalUnion::single(Rational(0), Rational(1)));
      const Rational g = dprime_diagnostic(dbl, a, 1, n, n / 32);
      const Rational w = dprime_diagnostic(dbl, a, 0, n, n / 32);
      if (!good.empty()) decreasing = decreasing && to_double(g) < good.back();
      good.push_back(to_double(g));
      wrong.push_back(to_double(w));
    }
    const double wrong_min = *std::min_element(wrong.begin(), wrong.end());
    CriterionResult c;
    c.name = "D' diagnostic";
    c.pass = decreasing && wrong_min > 0.5;
    c.details = std::string("q = 1 ") + (decreasing ? "strictly decreasing" : "not decreasing") + " from " +
                fmt("%.3e", good.front()) + " to " + fmt("%.3e", good.back()) + "; q = 0 minimum " +
                fmt("%.4f", wrong_min) + " > 0.5";
    c.data = {{"q1", good}, {"q0", wrong}};
    return c;
  }

  CriterionResult c13() {
    const auto& hits = doubling(5000);
    std::vector<PointMeasure> ens;
    for (std::size_t r = 0; r < 5000; ++r) ens.push_back(repp2_from_hits(hits[r]));
    const std::uint64_t q = 1;
    std::size_t ok = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    nlohmann::json cells = nlohmann::json::array();
    const auto fams = standard_grid();
    for (const auto& fam : fams) {
      const auto plain = void_frequency(ens, fam);
      const auto core = void_frequency_aq(ens, fam, q, kDoublingN);
      double tau_sum = 0.0;
      for (const auto& cell : fam.cells) tau_sum += cell.marks.measure();
      const double width = std::max(plain.hi - plain.lo, core.hi - core.lo);
      const double bound = static_cast<double>(q) * tau_sum / kDoublingN + 2.0 * width;
      const double diff = std::abs(core.p - plain.p);
      ok += diff <= bound ? 1 : 0;
      worst_slack = std::min(worst_slack, bound - diff);
      cells.push_back({{"void", plain.p}, {"void_aq", core.p}, {"bound", bound}});
    }
    CriterionResult c;
    c.name = "annulus bound";
    c.pass = ok == fams.size();
    c.details = std::to_string(ok) + "/" + std::to_string(fams.size()) + " cells within the bound, smallest slack " +
                fmt("%.4f", worst_slack);
    c.data = cells;
    return c;
  }

  CriterionResult c14() {
    auto measure = [](std::vector<std::pair<double, double>> atoms) {
      PointMeasure pm(1, Window{2.0, 10.0});
      for (const auto& [t, y] : atoms) pm.add(t, y);
      pm.sort();
      return pm;
    };
    bool ok = true;
    for (int n = 3; n <= 1000; ++n) {
      const double early = 1.0 - 2.0 / n;
      const auto h = h_record_projection(measure({{early, 2.0}, {1.0, 1.0}}));
      ok = ok && h.size() == 2 && h.time(0) == early && h.time(1) == 1.0 && count_open(h, -1.0, 2.0) == 2;
      const auto late = h_record_projection(measure({{1.0 + 2.0 / n, 2.0}, {1.0, 1.0}}));
      ok = ok && late.size() == 1 && late.time(0) == 1.0;
    }
    const auto limit = h_record_projection(measure({{1.0, 2.0}, {1.0, 1.0}}));
    ok = ok && limit.size() == 1 && limit.time(0) == 1.0 && limit.mark(0) == 1.0 && count_open(limit, -1.0, 2.0) == 1;
    CriterionResult c;
    c.name = "h discontinuity examples";
    c.pass = ok;
    c.details = ok ? "h(m_n) = d(1-2/n) + d(1) for n = 3..1000, h(m) = d(1), right-converging atoms give d(1)"
                   : "projection mismatch";
    return c;
  }

  CriterionResult c15() {
    const fs::path base = opt_.scratch.empty() ? fs::temp_directory_path() / "repp_acceptance" : opt_.scratch;
    fs::remove_all(base);
    const std::map<std::string, std::string> configs{
        {"simulate", "seed = 11\nruns = 10\nn = 1e4\n[system]\nkind = digit_shift\nbases = 2\n[observable]\n"
                     "g = g1\nzeta = 0\n"},
        {"limit-sample", "seed = 12\nruns = 50\n[law]\nkind = stacked_geometric\nalpha = 1.5\n"},
        {"records", "seed = 13\nruns = 50\nn = 1e4\n[system]\nkind = digit_shift\nbases = 2\n[observable]\n"
                    "g = g1\nzeta = pi/16\n"},
        {"nu", "seed = 14\n[nu]\nkind = contraction\nlambda = 1/2\nset = 0:1;2:3\nsamples = 10000\n"}};
    auto run_all = [&](const fs::path& root, unsigned workers) {
      for (const auto& [cmd, text] : configs) {
        write_text_file(root / (cmd + ".ini"), text);
        CommandOptions o;
        o.config_path = (root / (cmd + ".ini")).string();
        o.out_dir = root / cmd;
        o.workers = workers;
        std::ostringstream sink;
        run_command(cmd, o, sink);
      }
      write_text_file(root / "compare.ini", "artifact = simulate\ngrid = none\n[law]\nkind = stacked_geometric\nalpha = 2\n");
      CommandOptions o;
      o.config_path = (root / "compare.ini").string();
      o.out_dir = root / "compare";
      o.workers = workers;
      std::ostringstream sink;
      run_command("compare", o, sink);
    };
    run_all(base / "a", 1);
    run_all(base / "b", 0);
    std::map<std::string, std::string> first, second;
    for (const auto& [root, hashes] : {std::pair{base / "a", &first}, std::pair{base / "b", &second}})
      for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && e.path().extension() != ".ini")
          (*hashes)[fs::relative(e.path(), root).generic_string()] = sha256_file(e.path());
    CriterionResult c;
    c.name = "reproducibility";
    std::size_t mismatched = 0;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [path, hash] : first) {
      const bool same = second.count(path) && second.at(path) == hash;
      mismatched += same ? 0 : 1;
      files.push_back({{"path", path}, {"sha256", hash}});
    }
    const std::size_t compared = first.size();
    bool reported = true;
    for (const auto& [cmd, text] : configs) reported = reported && first.count(cmd + "/report.json");
    reported = reported && first.count("compare/report.json");
    c.pass = reported && mismatched == 0 && first.size() == second.size();
    c.details = std::to_string(compared - mismatched) + "/" + std::to_string(compared) +
                " artifacts byte-identical across two runs (1 worker vs all workers)";
    c.data = files;
    fs::remove_all(base);
    return c;
  }

  const AcceptanceOptions& opt_;
  std::ostream& log_;
  std::vector<OrbitHits> doubling_;
  std::vector<CriterionResult> results_;
};

}  // namespace

std::string CriterionResult::line() const {
  return std::string(pass ? "[PASS]" : "[FAIL]") + " #" + std::to_string(id) + " " + name + ": " + details + " (" +
         fmt("%.1f", seconds) + " s)";
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log) {
  Suite suite(opt, log);
  return suite.run();
}

}  // namespace repp
