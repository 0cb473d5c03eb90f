#include "doctest.h"

#include "repp/errors.hpp"
#include "repp/limits.hpp"
#include "repp/rng.hpp"
#include "repp/stats.hpp"

#include <cmath>
#include <set>

using namespace repp;

namespace {

Eigen::MatrixXd diag(double a, double b) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

RectangleFamily single(double t, double lo, double hi) {
  return RectangleFamily{{Cell{0.0, t, IntervalUnion{{lo, hi}}, {}}}};
}

// Void frequency and mean count of one family over `runs` samples, checked
// against the analytic values at 3 sigma.
void check_law(const LimitLaw& law, const Window& w, const RectangleFamily& fam, int runs,
               std::uint64_t seed) {
  std::uint64_t voids = 0;
  std::vector<double> counts;
  for (int r = 0; r < runs; ++r) {
    const auto pm = sample(law, w, derive_seed(seed, static_cast<std::uint64_t>(r)));
    const auto c = count_in(pm, fam);
    bool empty = true;
    double total = 0.0;
    for (auto x : c) {
      empty = empty && x == 0;
      total += static_cast<double>(x);
    }
    voids += empty ? 1 : 0;
    counts.push_back(total);
  }
  const double want_void = analytic_void(law, fam);
  const auto v = compare_void(wilson(voids, static_cast<std::uint64_t>(runs)), want_void,
                              2.0 * (1.0 - 0.99865));
  CHECK_MESSAGE(v.pass(), to_string(law.kind), " void ", static_cast<double>(voids) / runs, " vs ",
                want_void);
  double want_mean = 0.0;
  for (const auto& c : fam.cells) want_mean += expected_count(law, c);
  const auto est = mean_and_se(counts);
  CHECK_MESSAGE(std::abs(est.value - want_mean) <= 3 * est.se, to_string(law.kind), " mean ",
                est.value, " vs ", want_mean);
}

}  // namespace

TEST_SUITE("limits") {
  TEST_CASE("Poisson law counts, voids and empty windows") {
    CHECK(sample_poisson2d(Window{0.0, 10.0}, 1).empty());
    CHECK(sample_poisson2d(Window{1.0, 0.0}, 1).empty());
    check_law(LimitLaw::poisson2d(), Window{1.0, 10.0}, single(1.0, 0.0, 1.0), 100000, 3);
    check_law(LimitLaw::poisson2d(), Window{1.0, 10.0}, single(0.5, 0.0, 3.0), 20000, 4);
    CHECK(analytic_void(LimitLaw::poisson2d(), single(1.0, 0.0, 1.0)) == doctest::Approx(std::exp(-1.0)));
  }

  TEST_CASE("stacked geometric law") {
    const auto law = LimitLaw::stacked_geometric(2.0, 1);
    CHECK(law.theta == 0.5);
    CHECK_THROWS_AS(LimitLaw::stacked_geometric(0.5, 1), DomainError);
    const auto pm = sample_stacked_geometric(law, Window{1.0, 10.0}, 7);
    for (std::size_t i = 0; i + 1 < pm.size(); ++i)
      if (pm.time(i + 1) == pm.time(i)) CHECK(pm.mark(i + 1) == 2.0 * pm.mark(i));
    check_law(law, Window{1.0, 10.0}, single(1.0, 0.0, 2.0), 100000, 5);
    check_law(law, Window{1.0, 10.0}, single(1.0, 1.0, 3.0), 20000, 6);
    CHECK(analytic_void(law, single(0.7, 0.0, 2.0)) == doctest::Approx(std::exp(-0.7)));
    const auto three = LimitLaw::stacked_geometric(1.5, 1);
    CHECK(three.theta == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("stack lengths below a level follow the geometric cluster law") {
    const auto law = LimitLaw::stacked_geometric(2.0, 1);
    const Window w{1000.0, 1.0};
    std::vector<std::uint64_t> lengths;
    for (std::uint64_t r = 0; lengths.size() < 20000; ++r) {
      const auto pm = sample_stacked_geometric(law, w, derive_seed(12, r));
      std::size_t i = 0;
      while (i < pm.size()) {
        std::size_t j = i;
        while (j < pm.size() && pm.time(j) == pm.time(i)) ++j;
        lengths.push_back(j - i);
        i = j;
      }
    }
    CHECK(geometric_fit(lengths, 0.5).pass());
  }

  TEST_CASE("compound Poisson multiplicities") {
    const auto pm = sample_compound1d(1.0, 3.0, Window{10.0, 0.0}, 1);
    for (std::size_t i = 0; i < pm.size(); ++i) CHECK(pm.mark(i) == 1.0);
    std::vector<std::uint64_t> sizes;
    for (int r = 0; sizes.size() < 100000; ++r) {
      const auto p = sample_compound1d(0.4, 5.0, Window{10.0, 0.0}, derive_seed(3, static_cast<std::uint64_t>(r)));
      for (std::size_t i = 0; i < p.size(); ++i) sizes.push_back(static_cast<std::uint64_t>(p.mark(i)));
    }
    std::vector<double> xs(sizes.begin(), sizes.end());
    const auto est = mean_and_se(xs);
    CHECK(std::abs(est.value - 2.5) < 3 * est.se);
    CHECK(geometric_fit(sizes, 0.4).pass());
    const auto law = LimitLaw::compound1d(0.5, 2.0);
    CHECK(analytic_void(law, RectangleFamily{{Cell{0.0, 1.0, {}, {}}}}) == doctest::Approx(std::exp(-1.0)));
  }

  TEST_CASE("multi-dimensional laws") {
    const auto law = LimitLaw::stacked_linear(diag(2.0, 3.0));
    CHECK(law.theta == doctest::Approx(5.0 / 6.0));
    const auto pm = sample_multid(law, Window{1.0, 3.0}, 9);
    for (std::size_t i = 0; i + 1 < pm.size(); ++i)
      if (pm.time(i + 1) == pm.time(i)) {
        CHECK(pm.mark(i + 1, 0) == 2.0 * pm.mark(i, 0));
        CHECK(pm.mark(i + 1, 1) == 3.0 * pm.mark(i, 1));
      }
    const BoxUnion g(std::vector<Box>{{{-0.5, -0.5}, {0.5, 0.5}}});
    const RectangleFamily fam{{Cell{0.0, 1.0, {}, g}}};
    check_law(law, Window{1.0, 3.0}, fam, 20000, 10);
    check_law(LimitLaw::poisson_multi(2), Window{1.0, 3.0}, fam, 20000, 11);
    Cell c{0.0, 2.0, {}, BoxUnion(std::vector<Box>{{{0.0, 0.0}, {1.0, 1.0}}})};
    CHECK(expected_count(law, c) == doctest::Approx(2.0));
  }

  TEST_CASE("N-dagger stacks") {
    const auto law = LimitLaw::ndag(diag(2.0, 2.0));
    const auto pm = sample_ndag(law, Window{1.0, 50.0}, 4);
    for (std::size_t i = 0; i + 1 < pm.size(); ++i)
      if (pm.time(i + 1) == pm.time(i)) CHECK(pm.mark(i + 1) == doctest::Approx(4.0 * pm.mark(i)));
    const auto aniso = LimitLaw::ndag(diag(2.0, 3.0));
    check_law(aniso, Window{1.0, 10.0}, single(1.0, 0.0, 2.0), 20000, 12);
    check_law(aniso, Window{1.0, 10.0}, single(1.0, 1.0, 4.0), 20000, 13);
  }

  TEST_CASE("hat-N laws") {
    const auto hat = LimitLaw::hat_n(2.0);
    CHECK(hat.theta == 0.75);
    check_law(hat, Window{1.0, 10.0}, single(1.0, 1.0, 3.0), 20000, 14);
    const auto dbl = LimitLaw::double_hat_n();
    check_law(dbl, Window{1.0, 10.0}, single(1.0, 0.0, 2.0), 20000, 15);
    check_law(dbl, Window{1.0, 10.0}, single(1.0, 0.5, 2.5), 20000, 16);
    CHECK(analytic_void(dbl, single(1.0, 0.0, 2.0)) == doctest::Approx(std::exp(-20.0 / 11.0)));
  }

  TEST_CASE("samplers are deterministic and simple") {
    const auto law = LimitLaw::double_hat_n();
    CHECK(sample(law, Window{1.0, 10.0}, 77) == sample(law, Window{1.0, 10.0}, 77));
    std::size_t dup = 0;
    for (int r = 0; r < 2000; ++r) {
      const auto pm = sample(LimitLaw::stacked_geometric(2.0, 1), Window{1.0, 10.0}, static_cast<std::uint64_t>(r));
      std::set<std::pair<double, double>> seen;
      for (std::size_t i = 0; i < pm.size(); ++i) dup += seen.insert({pm.time(i), pm.mark(i)}).second ? 0 : 1;
    }
    CHECK(dup == 0);
  }

  TEST_CASE("laws serialise") {
    for (const auto& law : {LimitLaw::poisson2d(), LimitLaw::stacked_geometric(1.5, 1), LimitLaw::hat_n(3.0),
                            LimitLaw::double_hat_n(), LimitLaw::ndag(diag(2.0, 3.0)), LimitLaw::compound1d(0.5, 1.0)}) {
      const auto back = LimitLaw::from_json(law.to_json());
      CHECK(back.to_json() == law.to_json());
    }
    CHECK_THROWS_AS(LimitLaw::from_json(nlohmann::json{{"kind", "nope"}}), ConfigError);
  }
}
