#include "doctest.h"

#include "repp/empirical.hpp"
#include "repp/errors.hpp"
#include "repp/rng.hpp"

#include <cmath>

using namespace repp;

namespace {

using RU = RationalIntervalUnion;
const std::vector<ExactReal> kZero{ExactReal::rational(0)};

OrbitRunConfig doubling_config(double n, double cap) {
  OrbitRunConfig cfg{SystemSpec::digit_shift({2}),
                     ThresholdScheme::analytic(ObservableSpec::g1(kZero), n)};
  cfg.mark_cap = cap;
  cfg.lookahead = 64;
  return cfg;
}

Cell cell(double a, double b, double lo, double hi) {
  return Cell{a, b, IntervalUnion{{lo, hi}}, {}};
}

}  // namespace

TEST_SUITE("empirical") {
  TEST_CASE("one-dimensional REPP atoms") {
    const std::vector<double> low(20, 0.0);
    CHECK(build_repp1(low, 1.0, 10).empty());
    std::vector<double> one(10, 0.0);
    one[5] = 2.0;
    const auto pm = build_repp1(one, 1.0, 10);
    REQUIRE(pm.size() == 1);
    CHECK(pm.time(0) == 0.5);
  }

  TEST_CASE("two-dimensional marks are n times the ball measure") {
    const double n = 1000;
    const auto ts = ThresholdScheme::analytic(ObservableSpec::g1(kZero), n);
    const double eps = 1e-3;
    const std::vector<double> values{ts.observable().g_of(0.0 + 1e-300), ts.observable().g_of(eps)};
    const auto pm = build_repp2(values, ts, 10.0);
    REQUIRE(pm.size() == 2);
    CHECK(pm.mark(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pm.mark(1) == doctest::Approx(2 * n * eps).epsilon(1e-12));
  }

  TEST_CASE("exceedance counts have mean tau") {
    auto cfg = doubling_config(1e5, 1.0);
    double total = 0.0, sq = 0.0;
    const int runs = 2000;
    for (int r = 0; r < runs; ++r) {
      const double c = static_cast<double>(repp1_from_hits(run_orbit(cfg, derive_seed(21, r)), 1.0).size());
      total += c;
      sq += c * c;
    }
    const double mean = total / runs;
    const double se = std::sqrt((sq / runs - mean * mean) / runs);
    CHECK(std::abs(mean - 1.0) < 3 * se);
  }

  TEST_CASE("builders agree on counts") {
    auto cfg = doubling_config(1e4, 10.0);
    for (int r = 0; r < 50; ++r) {
      const auto hits = run_orbit(cfg, derive_seed(5, r));
      const auto n1 = repp1_from_hits(hits, 3.0);
      const auto n2 = repp2_from_hits(hits);
      RectangleFamily fam{{Cell{0.0, 1.0, IntervalUnion{{-1.0, 3.0}}, {}}}};
      CHECK(count_in(n2, fam)[0] == n1.size());
    }
  }

  TEST_CASE("consecutive cluster marks at the doubling fixed point double exactly") {
    auto cfg = doubling_config(1e6, 10.0);
    std::size_t pairs = 0;
    for (int r = 0; r < 30; ++r) {
      const auto hits = run_orbit(cfg, derive_seed(8, r));
      for (std::size_t i = 0; i + 1 < hits.size(); ++i)
        if (hits.index[i + 1] == hits.index[i] + 1 && hits.mark[i] < 5.0) {
          CHECK(hits.mark[i + 1] == doctest::Approx(2 * hits.mark[i]).epsilon(1e-9));
          ++pairs;
        }
    }
    CHECK(pairs > 10);
  }

  TEST_CASE("torus offsets map by diag(2,3)") {
    const auto spec = SystemSpec::digit_shift({2, 3});
    const std::vector<ExactReal> origin{ExactReal::rational(0), ExactReal::rational(0)};
    OrbitRunConfig cfg{spec, ThresholdScheme::analytic(ObservableSpec::g1(origin), 1e5)};
    cfg.mark_cap = 30.0;
    cfg.keep_offsets = true;
    std::size_t pairs = 0;
    for (int r = 0; r < 40; ++r) {
      const auto hits = run_orbit(cfg, derive_seed(2, r));
      const auto pm = repp_multi_from_hits(hits, cfg.ts.chart_scale(), 3.0);
      for (std::size_t i = 0; i + 1 < hits.size(); ++i)
        if (hits.index[i + 1] == hits.index[i] + 1) {
          CHECK(hits.offset[2 * i + 2] == doctest::Approx(2 * hits.offset[2 * i]).epsilon(1e-9));
          CHECK(hits.offset[2 * i + 3] == doctest::Approx(3 * hits.offset[2 * i + 1]).epsilon(1e-9));
          ++pairs;
        }
      for (std::size_t i = 0; i < pm.size(); ++i)
        CHECK(std::hypot(pm.mark(i, 0), pm.mark(i, 1)) < 3.0);
    }
    CHECK(pairs > 5);
  }

  TEST_CASE("A^(q) at the doubling fixed point") {
    const auto dbl = SystemSpec::digit_shift({2});
    const Rational eps(1, 64);
    const RU ball{{Rational(0), eps}, {Rational(1) - eps, Rational(1)}};
    CHECK(aq_set(ball, dbl, 0) == ball);
    const RU a1 = aq_set(ball, dbl, 1);
    CHECK(a1 == RU{{eps / 2, eps}, {Rational(1) - eps, Rational(1) - eps / 2}});
    CHECK(a1.measure() / ball.measure() == Rational(1, 2));
    RU prev = ball;
    for (int q = 1; q < 5; ++q) {
      const RU cur = aq_set(ball, dbl, q);
      CHECK(cur.subtract(prev).empty());
      prev = cur;
    }
  }

  TEST_CASE("choice of q") {
    const auto dbl = SystemSpec::digit_shift({2});
    ChooseQOptions opt;
    opt.period = 1;
    opt.tau_lo = 0;
    opt.tau_hi = 1;
    CHECK(choose_q(dbl, ObservableSpec::g1(kZero), opt).q == 1);
    ChooseQOptions generic;
    generic.tau_hi = 1;
    CHECK(choose_q(dbl, ObservableSpec::g1({ExactReal::pi_multiple(Rational(1, 16))}), generic).q == 0);
    CHECK(q_prime(1, 0.25, 1.0, std::log(2.0)) == 2);
  }

  TEST_CASE("counting conventions") {
    RectangleFamily fam{{cell(0.0, 1.0, 0.5, 1.5)}};
    CHECK(count_in(PointMeasure(), fam)[0] == 0);
    PointMeasure pm;
    pm.add(0.5, 1.0);
    CHECK(count_in(pm, fam)[0] == 1);
    PointMeasure edge;
    edge.add(0.5, 0.5);
    CHECK(count_in(edge, fam)[0] == 0);
    PointMeasure top;
    top.add(0.5, 1.5);
    CHECK(count_in(top, fam)[0] == 1);
  }

  TEST_CASE("clusters group exceedances within q steps") {
    const std::vector<std::uint64_t> idx{10, 11, 12, 500};
    const auto s = clusters(idx, {}, 1, 1000, 1000);
    CHECK(s.sizes == std::vector<std::uint64_t>{3, 1});
    CHECK(s.exceedances() == 4);
    CHECK(s.theta_clusters.value == doctest::Approx(0.5));
    CHECK(clusters(std::vector<std::uint64_t>{}, {}, 1, 10, 10).sizes.empty());
  }

  TEST_CASE("both extremal index estimators agree at the doubling fixed point") {
    auto cfg = doubling_config(1e5, 1.0);
    ClusterSummary all;
    for (int r = 0; r < 4000; ++r) all.merge(clusters_from_hits(run_orbit(cfg, derive_seed(31, r)), 1.0, 1));
    all.finalize();
    const double joint = std::hypot(all.theta_aq.se, all.theta_clusters.se);
    CHECK(std::abs(all.theta_aq.value - all.theta_clusters.value) < 3 * joint);
    CHECK(std::abs(all.theta_aq.value - 0.5) < 3 * all.theta_aq.se + 0.01);
  }

  TEST_CASE("D' diagnostic at the doubling fixed point") {
    const auto dbl = SystemSpec::digit_shift({2});
    Rational last(1000);
    for (int k = 10; k <= 16; ++k) {
      const std::uint64_t n = 1ULL << k;
      const auto ts = ThresholdScheme::analytic(ObservableSpec::g1(kZero), static_cast<double>(n));
      const RU a = ts.band_preimage(RU{{Rational(0), Rational(1)}});
      const Rational good = dprime_diagnostic(dbl, a, 1, n, n / 32);
      CHECK(good < last);
      if (k == 10) CHECK(good < Rational(1, 20));
      last = good;
      CHECK(dprime_diagnostic(dbl, a, 0, n, n / 32) > Rational(1, 2));
      CHECK(dprime_diagnostic(dbl, RU{}, 1, n, n / 32) == 0);
    }
  }

  TEST_CASE("void frequencies") {
    std::vector<PointMeasure> ens(10);
    CHECK(void_frequency(ens, RectangleFamily{}).p == 1.0);
    CHECK_THROWS(void_frequency({}, RectangleFamily{}));
    ens[0].add(0.2, 0.5);
    const auto v = void_frequency(ens, RectangleFamily{{cell(0.0, 1.0, 0.0, 1.0)}});
    CHECK(v.voids == 9);
    CHECK(v.lo < 0.9);
    CHECK(v.hi > 0.9);
  }
}
