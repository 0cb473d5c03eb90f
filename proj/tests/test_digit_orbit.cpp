#include "doctest.h"

#include "repp/digit_orbit.hpp"
#include "repp/errors.hpp"

#include <cmath>
#include <numbers>

using namespace repp;

namespace {

const std::vector<std::vector<ExactReal>> kZero{{ExactReal::rational(0)}};

std::vector<std::uint8_t> padded(std::vector<std::uint8_t> lead, std::size_t zeros) {
  lead.resize(lead.size() + zeros, 0);
  return lead;
}

}  // namespace

TEST_SUITE("digit_orbit") {
  TEST_CASE("distances read off the leading binary digits") {
    const auto spec = SystemSpec::digit_shift({2});
    DigitStreamOrbit a(spec, kZero, 40, 1, {padded({0, 1, 1}, 60)});
    CHECK(a.distance().value == doctest::Approx(0.375).epsilon(1e-12));
    DigitStreamOrbit b(spec, kZero, 40, 1, {padded({0, 1}, 60)});
    CHECK(b.step().value == doctest::Approx(0.5).epsilon(1e-12));
    DigitStreamOrbit c(spec, kZero, 40, 1, {padded({1, 0, 0, 0, 1}, 60)});
    CHECK(c.step().value == doctest::Approx(0.0625).epsilon(1e-12));
  }

  TEST_CASE("a point at distance eps right of the fixed point moves to 2 eps") {
    const auto spec = SystemSpec::digit_shift({2});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      DigitStreamOrbit o(spec, kZero, 60, seed, {{0, 0, 0, 0, 0, 1}});
      const double eps = o.distance().value;
      REQUIRE(eps < 0.25);
      CHECK(o.offset()[0] > 0.0);
      CHECK(o.step().value == doctest::Approx(2 * eps).epsilon(1e-12));
    }
  }

  TEST_CASE("same seed reproduces the same distances") {
    const auto spec = SystemSpec::digit_shift({3});
    const std::vector<std::vector<ExactReal>> target{{parse_exact_real("pi/16")}};
    DigitStreamOrbit a(spec, target, 50, 42), b(spec, target, 50, 42), c(spec, target, 50, 43);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
      const double x = a.step().value;
      CHECK(x == b.step().value);
      differs = differs || x != c.step().value;
    }
    CHECK(differs);
  }

  TEST_CASE("scan visits exactly the points inside the radius") {
    const auto spec = SystemSpec::digit_shift({3});
    const std::vector<std::vector<ExactReal>> target{{parse_exact_real("pi/16")}};
    DigitStreamOrbit a(spec, target, 40, 7), b(spec, target, 40, 7);
    const double radius[] = {0.01};
    std::vector<std::uint64_t> scanned;
    a.scan(20000, radius, [&](const OrbitHit& h) { scanned.push_back(h.j); });
    std::vector<std::uint64_t> direct;
    for (std::uint64_t j = 0; j < 20000; ++j) {
      if (b.distance().value < 0.01) direct.push_back(j);
      b.advance(1);
    }
    CHECK(scanned == direct);
    CHECK(a.index() == 20000);
    CHECK(scanned.size() > 200);
  }

  TEST_CASE("the two-dimensional engine measures Euclidean torus distance") {
    const auto spec = SystemSpec::digit_shift({2, 3});
    const std::vector<std::vector<ExactReal>> target{{ExactReal::rational(0), ExactReal::rational(0)}};
    DigitStreamOrbit o(spec, target, 40, 5);
    for (int i = 0; i < 200; ++i) {
      const auto off = o.offset();
      const double d = o.distance().value;
      CHECK(d == doctest::Approx(std::hypot(off[0], off[1])).epsilon(1e-12));
      CHECK(std::abs(off[0]) <= 0.5);
      CHECK(std::abs(off[1]) <= 0.5);
      o.advance(1);
    }
  }

  TEST_CASE("resolution flags and caps") {
    const auto spec = SystemSpec::digit_shift({2});
    DigitStreamOrbit o(spec, kZero, 20, 1, {std::vector<std::uint8_t>(64, 0)});
    CHECK(o.distance().unresolved);
    CHECK(o.distance().value < 2.0 * std::pow(2.0, -20));
    CHECK_THROWS_AS(DigitStreamOrbit(spec, kZero, kMaxDigits + 1, 1), ResolutionError);
    CHECK(suggested_resolution(2, 1e6, 1e-6) == 40 + 16);
  }
}
