#include "doctest.h"

#include "repp/errors.hpp"
#include "repp/observables.hpp"
#include "repp/rng.hpp"

#include <cmath>
#include <numbers>

using namespace repp;

namespace {

const std::vector<ExactReal> kZero{ExactReal::rational(0)};

// Ball measure of B(0.5, 0.05) under the intermittent map with alpha = 0.2,
// from a dithered 10^8-step float orbit.
constexpr double kLsvBallOracle = 0.09556;

}  // namespace

TEST_SUITE("observables") {
  TEST_CASE("evaluation of the g families and the two-site tents") {
    CHECK(evaluate(ObservableSpec::g1(kZero), {std::exp(-1.0)}) == doctest::Approx(1.0));
    CHECK(evaluate(ObservableSpec::g2(kZero, 1.0), {0.1}) == doctest::Approx(10.0));
    const auto two = ObservableSpec::two_site();
    CHECK(evaluate(two, {std::numbers::pi / 16}) == doctest::Approx(1.0));
    CHECK(evaluate(two, {3 * std::numbers::pi / 16}) == doctest::Approx(1.0));
    CHECK(evaluate(two, {0.9}) == 0.0);
  }

  TEST_CASE("exceedance sets are balls with the expected radii") {
    const auto g2 = exceedance_set(ObservableSpec::g2(kZero, 1.0), 10.0);
    CHECK(g2.measure() == doctest::Approx(0.2));
    CHECK(g2.contains(0.05));
    CHECK(g2.contains(0.95));
    const auto radii = exceedance_radii(ObservableSpec::two_site(), 0.99);
    REQUIRE(radii.size() == 2);
    CHECK(radii[0] == doctest::Approx(1e-4));
    CHECK(radii[1] == doctest::Approx(1e-3));
    for (double u : {0.9, 0.99, 0.999}) {
      const auto r = exceedance_radii(ObservableSpec::two_site(), u);
      CHECK(r[0] / (r[0] + r[1]) == doctest::Approx(1.0 / 11.0));
    }
    CHECK(exceedance_set(ObservableSpec::g3(kZero, 1.0, 1.0), 2.0).empty());
  }

  TEST_CASE("evaluate and exceedance_set agree on random points") {
    Engine eng(17);
    const std::vector<ObservableSpec> specs{
        ObservableSpec::g1({ExactReal::rational(Rational(3, 10))}), ObservableSpec::g2(kZero, 2.0),
        ObservableSpec::g3({ExactReal::rational(Rational(1, 2))}, 1.0, 1.0), ObservableSpec::two_site()};
    const double levels[] = {2.0, 5.0, 0.7, 0.95};
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const auto set = exceedance_set(specs[s], levels[s]);
      for (int i = 0; i < 5000; ++i) {
        const double x = uniform01(eng);
        CHECK((evaluate(specs[s], {x}) > levels[s]) == set.contains(x));
      }
    }
  }

  TEST_CASE("analytic thresholds and their inverses") {
    const double n = 1e6;
    const auto ts = ThresholdScheme::analytic(ObservableSpec::g1(kZero), n);
    for (double tau : {0.1, 1.0, 10.0}) {
      CHECK(ts.threshold(tau) == doctest::Approx(-std::log(tau / (2 * n))).epsilon(1e-12));
      CHECK(ts.tau_of(ts.threshold(tau)) == doctest::Approx(tau).epsilon(1e-10));
      CHECK(n * exceedance_set(ts.observable(), ts.threshold(tau)).measure() ==
            doctest::Approx(tau).epsilon(1e-9));
    }
    const auto two = ThresholdScheme::analytic(ObservableSpec::two_site(), n);
    for (double tau : {0.1, 1.0, 10.0}) {
      CHECK(two.threshold(tau) == doctest::Approx(1.0 - (100.0 / 11.0) * tau / (2 * n)).epsilon(1e-14));
      CHECK(two.tau_of(two.threshold(tau)) == doctest::Approx(tau).epsilon(1e-8));
    }
    CHECK(ts.threshold(1.0) > ts.threshold(2.0));
    CHECK(ts.tau_of(10.0) > ts.tau_of(11.0));
  }

  TEST_CASE("exact band preimages have measure tau / n") {
    const auto ts = ThresholdScheme::analytic(ObservableSpec::g1(kZero), 1024);
    const RationalIntervalUnion band{{Rational(1, 2), Rational(3)}};
    CHECK(ts.band_preimage(band).measure() * 1024 == Rational(5, 2));
    CHECK(ts.radius_exact(Rational(2)) == Rational(1, 1024));
  }

  TEST_CASE("Birkhoff calibration of ball measures") {
    const auto obs = ObservableSpec::g1({ExactReal::rational(Rational(3, 10))});
    const auto table = calibrate_birkhoff(SystemSpec::digit_shift({2}), obs, 200000, 3);
    CHECK(std::abs(table.measure(0.05) - 0.1) < 3 * table.standard_error(0.05));
    double last = 0.0;
    for (double r = 0.0; r < 0.5; r += 0.01) {
      CHECK(table.measure(r) >= last);
      last = table.measure(r);
    }
    CHECK_THROWS_AS(calibrate_birkhoff(SystemSpec::digit_shift({2}), obs, 1000, 3), DomainError);
    const auto ts = ThresholdScheme::birkhoff(obs, 1e3, std::nullopt);
    CHECK_THROWS_AS(ts.threshold(1.0), StateError);
  }

  TEST_CASE("Birkhoff calibration of the intermittent map matches the long-run oracle") {
    const auto obs = ObservableSpec::g1({ExactReal::rational(Rational(1, 2))});
    const auto table = calibrate_birkhoff(SystemSpec::intermittent(0.2), obs, 1000000, 8);
    CHECK(std::abs(table.measure(0.05) - kLsvBallOracle) < 3 * table.standard_error(0.05));
  }

  TEST_CASE("observable specs round-trip and validate") {
    const auto g3 = ObservableSpec::g3({ExactReal::pi_multiple(Rational(1, 16))}, 2.0, 1.5);
    const auto back = ObservableSpec::from_kv(parse_key_values(g3.to_kv().to_text()));
    CHECK(back.g == GKind::G3);
    CHECK(back.zeta == g3.zeta);
    CHECK(back.a == 2.0);
    CHECK(back.c == 1.5);
    CHECK_THROWS_AS(ObservableSpec::g2(kZero, -1.0), ConfigError);
  }
}
