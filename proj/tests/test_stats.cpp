#include "doctest.h"

#include "repp/errors.hpp"
#include "repp/rng.hpp"
#include "repp/stats.hpp"

#include <cmath>

using namespace repp;

namespace {

std::vector<std::uint64_t> poisson_draws(double mean, int count, std::uint64_t seed) {
  Engine eng(seed);
  std::vector<std::uint64_t> out;
  for (int i = 0; i < count; ++i) out.push_back(poisson(eng, mean));
  return out;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("Poisson chi-square accepts the null and rejects a shifted mean") {
    CHECK(chi_square_poisson(histogram(poisson_draws(2.0, 100000, 1)), 2.0).p_value > 0.01);
    const auto power = chi_square_poisson(histogram(poisson_draws(2.0, 100000, 2)), 3.0);
    CHECK(power.reject);
    const std::vector<std::uint64_t> zeros{500};
    CHECK(chi_square_poisson(zeros, 0.0).pass());
    CHECK_THROWS_AS(chi_square_poisson(std::vector<std::uint64_t>{3}, 2.0), UnderpoweredError);
  }

  TEST_CASE("chi-square rejection rate under the null") {
    int rejections = 0;
    for (std::uint64_t r = 0; r < 1000; ++r)
      rejections += chi_square_poisson(histogram(poisson_draws(2.0, 10000, 100 + r)), 2.0).reject ? 1 : 0;
    CHECK(rejections >= 5);
    CHECK(rejections <= 20);
  }

  TEST_CASE("geometric fits") {
    const std::vector<std::uint64_t> ones(1000, 1);
    CHECK(geometric_fit(ones, 1.0).pass());
    Engine eng(5);
    std::vector<std::uint64_t> sizes;
    for (int i = 0; i < 10000; ++i) sizes.push_back(geometric(eng, 0.5));
    CHECK(geometric_fit(sizes, 0.5).pass());
    CHECK(geometric_fit(sizes, 0.6).reject);
    CHECK_THROWS_AS(geometric_fit(std::vector<std::uint64_t>{0, 1}, 0.5), DataError);
  }

  TEST_CASE("Kolmogorov-Smirnov against exponential gaps") {
    Engine eng(6);
    std::vector<double> gaps, flat;
    for (int i = 0; i < 5000; ++i) {
      gaps.push_back(exponential(eng, 1.0));
      flat.push_back(uniform(eng, 1e-9, 2.0));
    }
    CHECK(ks_exponential(gaps, 1.0).pass());
    CHECK(ks_exponential(flat, 1.0).reject);
    CHECK_THROWS_AS(ks_exponential(std::vector<double>(50, 1.0), 1.0), UnderpoweredError);
    std::vector<double> bad(200, 1.0);
    bad[3] = 0.0;
    CHECK_THROWS_AS(ks_exponential(bad, 1.0), DataError);
    CHECK(kolmogorov_tail(1.358) == doctest::Approx(0.05).epsilon(0.01));
    CHECK(kolmogorov_tail(1.628) == doctest::Approx(0.01).epsilon(0.01));
    CHECK(kolmogorov_tail(0.5) == doctest::Approx(0.9639).epsilon(1e-3));
  }

  TEST_CASE("KS rejection rate under the null") {
    int rejections = 0;
    for (std::uint64_t r = 0; r < 1000; ++r) {
      Engine eng(derive_seed(77, r));
      std::vector<double> gaps;
      for (int i = 0; i < 500; ++i) gaps.push_back(exponential(eng, 2.0));
      rejections += ks_exponential(gaps, 2.0).reject ? 1 : 0;
    }
    CHECK(rejections >= 5);
    CHECK(rejections <= 20);
  }

  TEST_CASE("void comparisons") {
    CHECK(compare_void(wilson(1440, 2400), std::exp(-0.5)).pass());
    CHECK(compare_void(wilson(5000, 10000), std::exp(-0.5)).reject);
    CHECK(compare_void(wilson(20, 20), 1.0).pass());
    CHECK(compare_void(wilson(19, 20), 1.0).reject);
    const auto small = compare_void(wilson(2, 20), 0.05);
    CHECK(small.test == "void_exact_binomial");
    CHECK(small.pass());
  }

  TEST_CASE("mean comparisons") {
    CHECK(compare_mean(1.02, 0.01, 100, 1.0).pass());
    CHECK(compare_mean(1.05, 0.01, 100, 1.0).reject);
    CHECK(compare_mean(3.2898239873642048, 0.0, 100, 3.2898239873642052).pass());
    CHECK(compare_mean(3.29, 0.0, 100, 3.2898239873642052).reject);
  }

  TEST_CASE("reports round-trip through JSON") {
    const auto r = chi_square_poisson(histogram(poisson_draws(1.0, 1000, 3)), 1.0);
    const auto back = GofReport::from_json(r.to_json());
    CHECK(back.to_json() == r.to_json());
    CHECK(back.pass() == (r.p_value >= r.level));
  }

  TEST_CASE("Bonferroni levels") {
    CHECK(bonferroni_level(0.01, 20) == doctest::Approx(0.0005));
    CHECK(two_sided_z(0.05) == doctest::Approx(1.959964).epsilon(1e-6));
    CHECK_THROWS_AS(bonferroni_level(0.01, 0), DomainError);
  }
}
