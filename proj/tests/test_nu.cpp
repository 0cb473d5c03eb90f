#include "doctest.h"

#include "repp/errors.hpp"
#include "repp/nu.hpp"
#include "repp/observables.hpp"
#include "repp/rng.hpp"

#include <cmath>

using namespace repp;

namespace {

Eigen::MatrixXd diag(double a, double b) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

IntervalUnion random_union(Engine& eng) {
  std::vector<Interval<double>> parts;
  const int k = 1 + static_cast<int>(uniform01(eng) * 4);
  for (int i = 0; i < k; ++i) {
    const double a = uniform(eng, 0.0, 9.0);
    parts.push_back({a, a + uniform(eng, 0.05, 1.0)});
  }
  return IntervalUnion(parts);
}

}  // namespace

TEST_SUITE("nu") {
  TEST_CASE("closed forms") {
    const IntervalUnion a{{1.0, 2.0}, {3.0, 4.0}};
    CHECK(nu_eval(OuterMeasureSpec::lebesgue(), a) == doctest::Approx(2.0));
    CHECK(nu_eval(OuterMeasureSpec::contraction(0.5), a) == doctest::Approx(1.5));
    for (double theta : {0.5, 2.0 / 3.0, 0.9})
      CHECK(nu_eval(OuterMeasureSpec::contraction(1 - theta), IntervalUnion{{0.0, 3.0}}) ==
            doctest::Approx(3.0 * theta).epsilon(1e-12));
    const auto dhn = OuterMeasureSpec::mixture({10.0 / 11.0, 0.0}, {1.0 / 11.0, 10.0 / 3.0});
    CHECK(nu_eval(dhn, IntervalUnion{{0.0, 2.0}}) == doctest::Approx(20.0 / 11.0));
    CHECK(nu_eval(dhn, IntervalUnion{{1.0, 2.0}}) == doctest::Approx(1.0));
  }

  TEST_CASE("exact rational evaluation") {
    const RationalIntervalUnion a{{Rational(1), Rational(2)}, {Rational(3), Rational(4)}};
    CHECK(nu_eval_exact(OuterMeasureSpec::contraction(0.5), a, Rational(1, 2)) == Rational(3, 2));
  }

  TEST_CASE("linear families on boxes") {
    const BoxUnion unit(std::vector<Box>{{{1.0, 1.0}, {2.0, 2.0}}});
    const auto spec = OuterMeasureSpec::linear(diag(0.5, 1.0 / 3.0));
    CHECK(nu_eval(spec, unit) == doctest::Approx(1.0));
    const auto mc = nu_monte_carlo(spec, unit, 100000, 4);
    CHECK(std::abs(mc.value - nu_eval(spec, unit)) <= 3 * mc.sigma + 1e-12);
    const BoxUnion origin(std::vector<Box>{{{-1.0, -1.0}, {1.0, 1.0}}});
    CHECK(nu_eval(spec, origin) == doctest::Approx(4.0 * (1.0 - 1.0 / 6.0)).epsilon(1e-9));
    Eigen::MatrixXd rot(2, 2);
    rot << 0.3, -0.2, 0.25, 0.35;
    const auto skew = OuterMeasureSpec::linear(rot);
    const auto mc2 = nu_monte_carlo(skew, origin, 200000, 6);
    CHECK(std::abs(mc2.value - nu_eval(skew, origin)) <= 3 * mc2.sigma);
  }

  TEST_CASE("radial family evaluates the N-dagger measure") {
    Eigen::MatrixXd dt = diag(2.0, 2.0);
    const auto spec = OuterMeasureSpec::linear(dt.inverse(), true);
    CHECK(nu_eval(spec, IntervalUnion{{0.0, 4.0}}) == doctest::Approx(3.0).epsilon(1e-9));
    const auto aniso = OuterMeasureSpec::linear(diag(0.5, 1.0 / 3.0), true);
    const IntervalUnion band{{0.1, 2.0}};
    const auto mc = nu_monte_carlo(aniso, band, 200000, 8);
    CHECK(std::abs(mc.value - nu_eval(aniso, band)) <= 3 * mc.sigma);
  }

  TEST_CASE("Monte-Carlo agreement on random unions") {
    Engine eng(99);
    const std::vector<OuterMeasureSpec> specs{
        OuterMeasureSpec::lebesgue(), OuterMeasureSpec::contraction(0.5),
        OuterMeasureSpec::mixture({0.5, 0.0}, {0.5, 0.5}),
        OuterMeasureSpec::mixture({10.0 / 11.0, 0.0}, {1.0 / 11.0, 10.0 / 3.0})};
    for (const auto& spec : specs) {
      int agree = 0;
      for (int i = 0; i < 20; ++i) {
        const auto a = random_union(eng);
        const auto mc = nu_monte_carlo(spec, a, 20000, derive_seed(1, static_cast<std::uint64_t>(i)));
        agree += std::abs(mc.value - nu_eval(spec, a)) <= 4 * mc.sigma + 1e-12 ? 1 : 0;
      }
      CHECK(agree == 20);
    }
  }

  TEST_CASE("monotonicity, bounds and homogeneity") {
    Engine eng(5);
    const auto spec = OuterMeasureSpec::contraction(1.0 / 3.0);
    for (int i = 0; i < 100; ++i) {
      const auto a = random_union(eng);
      const auto b = a.unite(random_union(eng));
      const double va = nu_eval(spec, a);
      CHECK(va >= 0.0);
      CHECK(va <= a.measure() + 1e-12);
      CHECK(va <= nu_eval(spec, b) + 1e-12);
      CHECK(nu_eval(spec, a.scaled(2.5)) == doctest::Approx(2.5 * va).epsilon(1e-9));
    }
  }

  TEST_CASE("empirical nu from exact A^(q) sets") {
    const auto dbl = SystemSpec::digit_shift({2});
    const std::vector<ExactReal> zero{ExactReal::rational(0)};
    for (int k = 10; k <= 20; k += 2) {
      const auto ts = ThresholdScheme::analytic(ObservableSpec::g1(zero), std::ldexp(1.0, k));
      CHECK(empirical_nu(dbl, ts, RationalIntervalUnion{{Rational(0), Rational(3)}}, 1) == Rational(3, 2));
    }
    const auto ts = ThresholdScheme::analytic(ObservableSpec::g1(zero), std::ldexp(1.0, 20));
    const RationalIntervalUnion band{{Rational(1, 2), Rational(1)}};
    const double want = nu_eval(OuterMeasureSpec::contraction(0.5), IntervalUnion{{0.5, 1.0}});
    const double got = to_double(empirical_nu(dbl, ts, band, 1));
    CHECK(std::abs(got - want) / want < 1e-6);
    const auto generic = ThresholdScheme::analytic(ObservableSpec::g1({ExactReal::rational(Rational(1, 7))}), 4096);
    CHECK(empirical_nu(dbl, generic, band, 0) == Rational(1, 2));
  }

  TEST_CASE("spec validation and serialisation") {
    CHECK_THROWS_AS(OuterMeasureSpec::contraction(1.5), DomainError);
    CHECK_THROWS_AS(OuterMeasureSpec::linear(diag(2.0, 1.0)), DomainError);
    const auto m = OuterMeasureSpec::mixture({0.5, 0.0}, {0.5, 0.25});
    const auto back = OuterMeasureSpec::from_json(m.to_json());
    CHECK(back.kind == NuKind::Mixture);
    CHECK(back.terms[1].scale == 0.25);
    CHECK_THROWS_AS(nu_eval(OuterMeasureSpec::lebesgue(), IntervalUnion{{-1.0, 1.0}}), DomainError);
  }
}
