#include "doctest.h"

#include "repp/errors.hpp"
#include "repp/extremal.hpp"
#include "repp/limits.hpp"
#include "repp/rng.hpp"
#include "repp/stats.hpp"

#include <cmath>
#include <limits>

using namespace repp;

namespace {

PointMeasure atoms(std::initializer_list<std::pair<double, double>> list, double horizon = 5.0,
                   double cap = 10.0) {
  PointMeasure pm(1, Window{horizon, cap});
  for (auto [t, m] : list) pm.add(t, m);
  pm.sort();
  return pm;
}

std::vector<double> times(const PointMeasure& pm) { return pm.times(); }

bool same_atoms(const PointMeasure& a, const PointMeasure& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.time(i) != b.time(i) || a.mark(i) != b.mark(i)) return false;
  return true;
}

std::uint64_t record_count(const PointMeasure& pm, double a, double b) {
  return count_open(h_record_projection(pm), a, b);
}

}  // namespace

TEST_SUITE("extremal") {
  TEST_CASE("h1 is the running infimum of marks") {
    const auto p = h1_project(atoms({{1.0, 2.0}, {2.0, 1.0}}));
    CHECK(std::isinf(p.at(0.5)));
    CHECK(p.at(1.0) == 2.0);
    CHECK(p.at(1.9) == 2.0);
    CHECK(p.at(2.0) == 1.0);
    CHECK(p.at(4.9) == 1.0);
    const auto s = h1_project(atoms({{1.0, 2.0}, {1.0, 4.0}}));
    CHECK(s.jumps() == 1);
    CHECK(s.at(1.0) == 2.0);
    const auto t = h1_project(atoms({{1.0, 4.0}, {1.0, 2.0}, {3.0, 3.0}}));
    CHECK(t.jumps() == 1);
    CHECK(t.at(1.0) == 2.0);
  }

  TEST_CASE("h2 is the first passage below a level") {
    const auto pm = atoms({{1.0, 2.0}, {1.0, 4.0}}, 5.0);
    const auto p = h2_project(pm);
    CHECK(p.at(1.5) == 5.0);
    CHECK(p.at(2.0) == 5.0);
    CHECK(p.at(3.0) == 1.0);
    const auto q = h2_project(atoms({{1.0, 3.0}, {2.0, 1.0}}));
    CHECK(q.at(1.0) == 5.0);
    CHECK(q.at(2.0) == 2.0);
    CHECK(q.at(3.5) == 1.0);
    CHECK(h2_project(PointMeasure(1, Window{7.0, 10.0})).at(3.0) == 7.0);
  }

  TEST_CASE("paths from h1 are non-increasing and h2 paths are non-increasing in the level") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto pm = sample_stacked_geometric(LimitLaw::stacked_geometric(2.0, 1), Window{3.0, 10.0}, seed);
      const auto p1 = h1_project(pm);
      for (std::size_t i = 1; i < p1.values.size(); ++i) CHECK(p1.values[i] < p1.values[i - 1]);
      const auto p2 = h2_project(pm);
      for (std::size_t i = 1; i < p2.values.size(); ++i) CHECK(p2.values[i] < p2.values[i - 1]);
    }
  }

  TEST_CASE("the extremal path equals h1 of the two-dimensional REPP") {
    const std::vector<ExactReal> zero{ExactReal::rational(0)};
    const auto ts = ThresholdScheme::analytic(ObservableSpec::g1(zero), 2000);
    const auto orbit = iterate_float(SystemSpec::doubling_affine(), {0.123456789}, 4000, true, 3);
    std::vector<double> values;
    for (const auto& x : orbit) values.push_back(evaluate(ts.observable(), x));
    const auto path = extremal_path(values, ts, 10.0, 2.0);
    CHECK(path == h1_project(build_repp2(values, ts, 10.0, 2.0)));
    CHECK(path.jumps() > 0);
    const std::vector<double> flat(100, 1.0);
    const auto constant = extremal_path(flat, ts, 1e9, 0.05);
    CHECK(constant.jumps() == 1);
    CHECK(constant.at(0.04) == constant.at(0.0));
  }

  TEST_CASE("h3 and h agree unless atoms share a time") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto pm = sample_poisson2d(Window{2.0, 10.0}, seed);
      CHECK(same_atoms(h3_jumps(h1_project(pm)), h_record_projection(pm)));
    }
    const auto stacked = atoms({{1.0, 2.0}, {1.0, 1.0}});
    CHECK(times(h3_jumps(h1_project(stacked))) == times(h_record_projection(stacked)));
    const auto path = StepPath{0.0, 1.0, 5.0, {0.3, 0.7}, {2.0, 1.0}, true};
    CHECK(times(h3_jumps(path)) == std::vector<double>{0.3, 0.7});
  }

  TEST_CASE("record projections of the two boundary examples") {
    for (double n : {10.0, 100.0, 1e4, 1e8}) {
      const auto r = h_record_projection(atoms({{1.0 - 2.0 / n, 2.0}, {1.0, 1.0}}));
      CHECK(times(r) == std::vector<double>{1.0 - 2.0 / n, 1.0});
    }
    const auto limit = h_record_projection(atoms({{1.0, 2.0}, {1.0, 1.0}}));
    CHECK(times(limit) == std::vector<double>{1.0});
    CHECK(limit.mark(0) == 1.0);
  }

  TEST_CASE("record times of short series") {
    const std::vector<double> up{1.0, 2.0, 3.0};
    CHECK(record_times(up).times == std::vector<std::uint64_t>{0, 1, 2});
    const std::vector<double> down{3.0, 1.0, 2.0};
    CHECK(record_times(down).times == std::vector<std::uint64_t>{0});
    const std::vector<double> tie{1.0, 1.0, 2.0};
    CHECK(record_times(tie).times == std::vector<std::uint64_t>{0, 2});
    const std::vector<double> bad{1.0, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(record_times(bad), DataError);
  }

  TEST_CASE("iid record counts have harmonic mean") {
    const int m = 1000;
    double harmonic = 0.0;
    for (int k = 1; k <= m; ++k) harmonic += 1.0 / k;
    std::vector<double> counts;
    Engine eng(4);
    for (int r = 0; r < 5000; ++r) {
      std::vector<double> xs(m);
      for (auto& x : xs) x = uniform01(eng);
      counts.push_back(static_cast<double>(record_times(xs).size()));
    }
    const auto est = mean_and_se(counts);
    CHECK(std::abs(est.value - harmonic) < 3 * est.se);
  }

  TEST_CASE("record point processes") {
    RecordSeries rs;
    rs.times = {500};
    rs.normalized = {0.7};
    const auto pp = record_pp(rs, 1000);
    CHECK(pp.times.time(0) == 0.5);
    CHECK(pp.values.time(0) == 0.7);
  }

  TEST_CASE("the record law pmf") {
    CHECK(record_law_pmf(0.1, 1.0, 0) == doctest::Approx(0.1));
    CHECK(record_law_pmf(1.0 - 1e-12, 1.0, 0) == doctest::Approx(1.0));
    double total = 0.0;
    for (unsigned k = 0; k <= 200; ++k) total += record_law_pmf(0.05, 1.0, k);
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK_THROWS_AS(record_law_pmf(1.0, 1.0, 0), DomainError);
    CHECK_THROWS_AS(record_law_pmf(2.0, 1.0, 0), DomainError);
  }

  TEST_CASE("stacked geometric records follow the log-Poisson law") {
    const auto law = LimitLaw::stacked_geometric(2.0, 1);
    const double a = 0.1, b = 1.0;
    std::vector<std::uint64_t> counts;
    for (std::uint64_t r = 0; r < 100000; ++r)
      counts.push_back(record_count(sample_stacked_geometric(law, Window{1.0, 200.0}, derive_seed(6, r)), a, b));
    const auto rep = chi_square_pmf(histogram(counts), [&](std::uint64_t k) {
      return record_law_pmf(a, b, static_cast<unsigned>(k));
    }, 0, "log-poisson");
    CHECK(rep.p_value > 0.01);
  }

  TEST_CASE("double hat-N records follow the log-Poisson law in the limit") {
    const double a = 0.1, b = 1.0;
    std::vector<std::uint64_t> counts;
    for (std::uint64_t r = 0; r < 20000; ++r)
      counts.push_back(record_count(sample_double_hat_n(Window{1.0, 300.0}, derive_seed(7, r)), a, b));
    const auto rep = chi_square_pmf(histogram(counts), [&](std::uint64_t k) {
      return record_law_pmf(a, b, static_cast<unsigned>(k));
    }, 0, "log-poisson");
    CHECK(rep.p_value > 0.01);
  }

  TEST_CASE("separating each double hat-N stack in time adds records") {
    // Moving the upper atom of every two-atom stack slightly earlier turns
    // the stack into two consecutive records whenever its base is a record.
    const double a = 0.1, b = 1.0;
    std::vector<double> counts;
    for (std::uint64_t r = 0; r < 20000; ++r) {
      const auto pm = sample_double_hat_n(Window{1.0, 300.0}, derive_seed(7, r));
      PointMeasure split(1, pm.window());
      for (std::size_t i = 0; i < pm.size(); ++i) {
        const bool stacked = i + 1 < pm.size() && pm.time(i + 1) == pm.time(i);
        split.add(stacked ? pm.time(i) - 1e-9 : pm.time(i), pm.mark(i));
      }
      split.sort();
      counts.push_back(static_cast<double>(record_count(split, a, b)));
    }
    const auto est = mean_and_se(counts);
    CHECK(est.value - std::log(b / a) > 3 * est.se);
  }
}
