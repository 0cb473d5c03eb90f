#include "repp/battery.hpp"

#include "repp/ensemble.hpp"
#include "repp/errors.hpp"
#include "repp/extremal.hpp"
#include "repp/rng.hpp"

#include <cmath>

namespace repp {

namespace {

struct MemberTally {
  std::vector<std::uint8_t> empty;
  std::vector<double> total;
};

MemberTally tally_member(const PointMeasure& pm, const std::vector<RectangleFamily>& fams, bool compound) {
  MemberTally t;
  t.empty.reserve(fams.size());
  t.total.reserve(fams.size());
  for (const auto& fam : fams) {
    const double total = family_total(pm, fam, compound);
    t.empty.push_back(total == 0.0 ? 1 : 0);
    t.total.push_back(total);
  }
  return t;
}

GridTally fold(const std::vector<MemberTally>& members, std::size_t families) {
  GridTally out;
  out.samples = members.size();
  out.voids.assign(families, 0);
  out.means.resize(families);
  std::vector<double> xs(members.size());
  for (std::size_t f = 0; f < families; ++f) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      out.voids[f] += members[i].empty[f];
      xs[i] = members[i].total[f];
    }
    out.means[f] = mean_and_se(xs);
  }
  return out;
}

std::string cell_name(const std::string& prefix, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02zu", i);
  return prefix + "/" + buf;
}

}  // namespace

double family_total(const PointMeasure& pm, const RectangleFamily& fam, bool compound) {
  double total = 0.0;
  if (compound) {
    for (auto c : compound_counts(pm, fam)) total += static_cast<double>(c);
  } else {
    for (auto c : count_in(pm, fam)) total += static_cast<double>(c);
  }
  return total;
}

GridTally tally_grid(std::size_t count, const std::function<PointMeasure(std::size_t)>& member,
                     const std::vector<RectangleFamily>& fams, bool compound, unsigned workers) {
  const auto members = run_ensemble(
      count, [&](std::size_t i) { return tally_member(member(i), fams, compound); }, workers);
  return fold(members, fams.size());
}

GridTally tally_grid(const std::vector<PointMeasure>& ensemble, const std::vector<RectangleFamily>& fams,
                     bool compound) {
  std::vector<MemberTally> members;
  members.reserve(ensemble.size());
  for (const auto& pm : ensemble) members.push_back(tally_member(pm, fams, compound));
  return fold(members, fams.size());
}

std::vector<GofReport> void_reports(const GridTally& tally, const std::vector<double>& analytic, double level,
                                    const std::string& prefix) {
  if (analytic.size() != tally.voids.size()) throw DomainError("one analytic void per family is required");
  std::vector<GofReport> out;
  for (std::size_t f = 0; f < analytic.size(); ++f) {
    auto r = compare_void(wilson(tally.voids[f], tally.samples), analytic[f], level);
    r.test = cell_name(prefix, f);
    out.push_back(r);
  }
  return out;
}

std::vector<GofReport> mean_reports(const GridTally& tally, const std::vector<double>& expected, double level,
                                    const std::string& prefix) {
  if (expected.size() != tally.means.size()) throw DomainError("one expected count per family is required");
  std::vector<GofReport> out;
  for (std::size_t f = 0; f < expected.size(); ++f) {
    auto r = compare_mean(tally.means[f].value, tally.means[f].se, tally.samples, expected[f], level);
    r.test = cell_name(prefix, f);
    out.push_back(r);
  }
  return out;
}

GofReport grid_verdict(const std::string& name, const std::vector<GofReport>& cells, double min_pass_fraction) {
  if (cells.empty()) throw UnderpoweredError("grid '" + name + "' has no cells");
  GofReport r;
  r.test = name;
  r.dof = static_cast<double>(cells.size());
  r.level = cells.front().level;
  double min_p = 1.0;
  std::size_t passed = 0;
  for (const auto& c : cells) {
    min_p = std::min(min_p, c.p_value);
    passed += c.pass() ? 1 : 0;
    r.samples = std::max(r.samples, c.samples);
  }
  r.statistic = static_cast<double>(cells.size() - passed);
  r.p_value = std::min(1.0, min_p * static_cast<double>(cells.size()));
  const auto needed = static_cast<std::size_t>(std::ceil(min_pass_fraction * static_cast<double>(cells.size()) - 1e-9));
  r.reject = passed < needed;
  r.reference = std::to_string(passed) + "/" + std::to_string(cells.size()) + " cells pass, " +
                std::to_string(needed) + " required";
  return r;
}

std::vector<RectangleFamily> grid_for(int mark_dim, const Window& window) {
  if (mark_dim > 1) return standard_grid_multi(window.mark_cap);
  std::vector<RectangleFamily> out;
  for (auto& fam : standard_grid()) {
    bool inside = true;
    for (const auto& c : fam.cells)
      inside = inside && c.b <= window.horizon && (c.marks.empty() || c.marks.sup() <= window.mark_cap);
    if (inside) out.push_back(std::move(fam));
  }
  return out;
}

std::vector<double> analytic_voids(const LimitLaw& law, const std::vector<RectangleFamily>& fams) {
  std::vector<double> out;
  for (const auto& f : fams) out.push_back(analytic_void(law, f));
  return out;
}

std::vector<double> expected_totals(const LimitLaw& law, const std::vector<RectangleFamily>& fams) {
  std::vector<double> out;
  for (const auto& f : fams) {
    double total = 0.0;
    for (const auto& c : f.cells) total += expected_count(law, c);
    out.push_back(total);
  }
  return out;
}

LawCheck check_law_grid(const LimitLaw& law, const Window& window, const std::vector<RectangleFamily>& fams,
                        std::uint64_t samples, std::uint64_t seed, double level, unsigned workers) {
  const bool compound = law.kind == LawKind::CompoundPoisson1D;
  const auto tally = tally_grid(
      samples, [&](std::size_t i) { return sample(law, window, derive_seed(seed, i)); }, fams, compound, workers);
  const std::string name = to_string(law.kind);
  return {void_reports(tally, analytic_voids(law, fams), level, name + "/void"),
          mean_reports(tally, expected_totals(law, fams), level, name + "/mean")};
}

RecordRun record_run(const SystemSpec& spec, const ObservableSpec& obs, double n, double a, double b,
                     double cap, std::uint64_t seed) {
  if (!(0.0 < a && a < b)) throw DomainError("record window needs 0 < a < b");
  OrbitRunConfig cfg{spec, ThresholdScheme::analytic(obs, n)};
  cfg.horizon = b;
  for (double c = cap; c <= 1e7; c *= 8.0) {
    cfg.mark_cap = c;
    const auto hits = run_orbit(cfg, seed);
    if (hits.size() == 0 || static_cast<double>(hits.index.front()) > a * n) continue;
    const auto rs = record_times(hits);
    RecordRun out;
    out.cap = c;
    for (auto t : rs.times) {
      const double x = static_cast<double>(t) / n;
      if (x > a && x < b) ++out.count;
    }
    return out;
  }
  throw ResolutionError("no visit below the largest mark cap before the record window opens");
}

std::vector<GofReport> record_law_reports(const std::vector<std::uint64_t>& counts, double a, double b,
                                          double level) {
  if (counts.empty()) throw UnderpoweredError("no record counts");
  auto chi = chi_square_pmf(histogram(counts), [&](std::uint64_t k) { return record_law_pmf(a, b, static_cast<unsigned>(k)); },
                            0, "(a/b) log(b/a)^k / k!", level);
  chi.test = "records/log_poisson_pmf";
  std::vector<double> xs(counts.begin(), counts.end());
  const auto est = mean_and_se(xs);
  auto mean = compare_mean(est.value, est.se, counts.size(), std::log(b / a), level);
  mean.test = "records/mean";
  return {chi, mean};
}

}  // namespace repp
