#include "doctest.h"

#include "repp/errors.hpp"
#include "repp/observables.hpp"
#include "repp/rng.hpp"
#include "repp/systems.hpp"

#include <cmath>
#include <numbers>

using namespace repp;

namespace {

using RU = RationalIntervalUnion;

RU ball_at_zero(const Rational& eps) { return RU{{Rational(0), eps}, {Rational(1) - eps, Rational(1)}}; }

RU random_union(Engine& eng, int pieces) {
  std::vector<Interval<Rational>> parts;
  for (int i = 0; i < pieces; ++i) {
    const auto a = static_cast<long long>(uniform01(eng) * 1000);
    const auto len = 1 + static_cast<long long>(uniform01(eng) * 50);
    parts.push_back({Rational(a, 1024), Rational(std::min(a + len, 1024LL), 1024)});
  }
  return RU(parts);
}

bool subset(const RU& a, const RU& b) { return a.subtract(b).empty(); }

}  // namespace

TEST_SUITE("systems") {
  TEST_CASE("doubling image and preimage of dyadic intervals") {
    const auto dbl = SystemSpec::digit_shift({2});
    CHECK(image(dbl, RU{{Rational(0), Rational(1, 8)}}) == RU{{Rational(0), Rational(1, 4)}});
    CHECK(preimage(dbl, RU{{Rational(0), Rational(1, 4)}}) ==
          RU{{Rational(0), Rational(1, 8)}, {Rational(1, 2), Rational(5, 8)}});
    const auto aff = SystemSpec::doubling_affine();
    CHECK(preimage(aff, RU{{Rational(0), Rational(1, 4)}}) ==
          preimage(dbl, RU{{Rational(0), Rational(1, 4)}}));
  }

  TEST_CASE("3x image of a ball around pi/16 is the tripled ball around 3pi/16") {
    const auto tri = SystemSpec::digit_shift({3});
    const double z = std::numbers::pi / 16;
    const auto img = image(tri, IntervalUnion{{z - 0.01, z + 0.01}});
    const auto want = IntervalUnion{{3 * z - 0.03, 3 * z + 0.03}};
    CHECK(img.measure() == doctest::Approx(0.06).epsilon(1e-12));
    Engine eng(11);
    for (int i = 0; i < 10000; ++i) {
      const double x = uniform01(eng);
      CHECK(img.contains(x) == want.contains(x));
    }
  }

  TEST_CASE("image and preimage contain the original set and preserve Lebesgue measure") {
    Engine eng(3);
    for (int base : {2, 3}) {
      const auto spec = SystemSpec::digit_shift({base});
      for (int trial = 0; trial < 50; ++trial) {
        const RU s = random_union(eng, 1 + trial % 5);
        CHECK(subset(s, image(spec, preimage(spec, s))));
        CHECK(subset(s, preimage(spec, image(spec, s))));
        CHECK(preimage(spec, s).measure() == s.measure());
      }
    }
  }

  TEST_CASE("return times of balls and annuli at the doubling fixed point") {
    const auto dbl = SystemSpec::digit_shift({2});
    const Rational eps(1, 1024);
    CHECK(min_return_time(dbl, ball_at_zero(eps), 100) == 1u);
    const RU annulus{{eps / 2, eps}, {Rational(1) - eps, Rational(1) - eps / 2}};
    const auto r = min_return_time(dbl, annulus, 100);
    REQUIRE(r.has_value());
    CHECK(*r >= 9u);
    CHECK(*r == 10u);
  }

  TEST_CASE("return times grow without bound at a non-periodic point of 3x") {
    const auto tri = SystemSpec::digit_shift({3});
    const Rational z(137, 1000);
    std::uint64_t last = 0;
    for (int k = 10; k <= 20; k += 2) {
      const Rational eps = Rational(1, BigInt(1) << k);
      const auto r = min_return_time(tri, RU{{z - eps, z + eps}}, 60);
      const std::uint64_t value = r.value_or(61);
      CHECK(value >= last);
      last = value;
    }
    CHECK(last > 8u);
  }

  TEST_CASE("return times are monotone under enlargement") {
    const auto dbl = SystemSpec::digit_shift({2});
    Engine eng(9);
    for (int trial = 0; trial < 30; ++trial) {
      const RU s = random_union(eng, 2);
      const RU big = s.unite(random_union(eng, 1));
      const auto rs = min_return_time(dbl, s, 64).value_or(65);
      const auto rb = min_return_time(dbl, big, 64).value_or(65);
      CHECK(rb <= rs);
    }
  }

  TEST_CASE("Jacobians at periodic points") {
    const auto zero = std::vector<ExactReal>{ExactReal::rational(0)};
    CHECK(jacobian_at(SystemSpec::digit_shift({2}), zero, 1)(0, 0) == 2.0);
    CHECK(jacobian_at(SystemSpec::digit_shift({3}), zero, 1)(0, 0) == 3.0);
    const auto torus = SystemSpec::digit_shift({2, 3});
    const auto j = jacobian_at(torus, {ExactReal::rational(0), ExactReal::rational(0)}, 1);
    CHECK(j(0, 0) == 2.0);
    CHECK(j(1, 1) == 3.0);
    CHECK(j(0, 1) == 0.0);
    CHECK(jacobian_at(SystemSpec::digit_shift({2}), {ExactReal::rational(Rational(1, 3))}, 2)(0, 0) ==
          4.0);
    CHECK_THROWS_AS(jacobian_at(SystemSpec::digit_shift({2}), {ExactReal::rational(Rational(1, 5))}, 1),
                    DomainError);
  }

  TEST_CASE("float iteration of the doubling and intermittent maps") {
    const auto orbit = iterate_float(SystemSpec::doubling_affine(), {0.3}, 2, false);
    REQUIRE(orbit.size() == 2);
    CHECK(orbit[0][0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(orbit[1][0] == doctest::Approx(0.2).epsilon(1e-15));
    for (const auto& x : iterate_float(SystemSpec::intermittent(0.5), {0.0}, 100, false))
      CHECK(x[0] == 0.0);
    CHECK_THROWS_AS(iterate_float(SystemSpec::doubling_affine(), {1.5}, 2, false), DomainError);
    CHECK_THROWS_AS(iterate_float(SystemSpec::digit_shift({2}), {0.5}, 2, false), UnsupportedError);
  }

  TEST_CASE("dithering keeps a float doubling orbit equidistributed") {
    const auto plain = iterate_float(SystemSpec::doubling_affine(), {1.0 / 3.0}, 2000, false);
    CHECK(plain.back()[0] == plain[plain.size() - 2][0]);
    const auto orbit = iterate_float(SystemSpec::doubling_affine(), {1.0 / 3.0}, 100000, true, 5);
    std::vector<double> xs;
    for (const auto& x : orbit) xs.push_back(x[0]);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      d = std::max({d, (static_cast<double>(i) + 1) / n - xs[i], xs[i] - static_cast<double>(i) / n});
    // Kolmogorov 1% critical value.
    CHECK(std::sqrt(n) * d < 1.628);
  }

  TEST_CASE("system specs validate and round-trip through key-value text") {
    const auto spec = SystemSpec::digit_shift({2, 3});
    CHECK(SystemSpec::from_kv(parse_key_values(spec.to_kv().to_text())) == spec);
    const auto aff = SystemSpec::doubling_affine();
    CHECK(SystemSpec::from_kv(parse_key_values(aff.to_kv().to_text())) == aff);
    CHECK_THROWS_AS(SystemSpec::digit_shift({1}), ConfigError);
    CHECK_THROWS_AS(SystemSpec::from_kv(parse_key_values("kind=piecewise_affine\nbranches=0:1/2:2:0\n")),
                    ConfigError);
    CHECK_THROWS_AS(
        SystemSpec::from_kv(parse_key_values("kind=piecewise_affine\nbranches=0:1/2:2:0;1/4:1:2:-1\n")),
        ConfigError);
    CHECK_THROWS_AS(SystemSpec::from_kv(parse_key_values("kind=intermittent\nalpha=0.3\nmeasure=lebesgue\n")),
                    ConfigError);
    CHECK_THROWS_AS(preimage(SystemSpec::intermittent(0.5), IntervalUnion{{0.1, 0.2}}), UnsupportedError);
  }
}
