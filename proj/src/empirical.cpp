#include "repp/empirical.hpp"

#include "repp/digit_orbit.hpp"
#include "repp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace repp {

// ---------------------------------------------------------------------------
// Orbit runs

OrbitHits run_orbit(const OrbitRunConfig& cfg, std::uint64_t seed) {
  const SystemSpec& spec = cfg.spec;
  if (spec.kind != SystemKind::DigitShift)
    throw UnsupportedError("orbit runs use the digit-shift engine");
  const ObservableSpec& obs = cfg.ts.observable();
  const double n = cfg.ts.n();
  OrbitHits out;
  out.n = n;
  out.horizon = cfg.horizon;
  out.mark_cap = cfg.mark_cap;
  out.dim = spec.dimension;
  out.length = static_cast<std::uint64_t>(std::llround(n * cfg.horizon));
  out.scanned = out.length + cfg.lookahead;

  int k = cfg.resolution;
  if (k == 0) {
    const int bmin = *std::min_element(spec.bases.begin(), spec.bases.end());
    k = suggested_resolution(bmin, static_cast<double>(out.scanned), 1e-6);
  }
  const auto sites = obs.sites();
  std::vector<double> radius;
  for (std::size_t s = 0; s < sites.size(); ++s)
    radius.push_back(cfg.ts.radius(cfg.mark_cap, static_cast<int>(s)));

  DigitStreamOrbit orbit(spec, sites, k, seed);
  orbit.scan(out.scanned, radius, [&](const OrbitHit& h) {
    if (h.unresolved)
      throw ResolutionError("visit at step " + std::to_string(h.j) +
                            " is closer than two digit units; raise the resolution");
    out.index.push_back(h.j);
    out.mark.push_back(cfg.ts.mark_of_distance(h.target, h.distance));
    out.site.push_back(h.target);
    if (cfg.keep_offsets) out.offset.insert(out.offset.end(), h.offset.begin(), h.offset.end());
  });
  return out;
}

// ---------------------------------------------------------------------------
// Builders

PointMeasure build_repp1(std::span<const double> values, double u, double n, double horizon) {
  PointMeasure pm(0, Window{horizon, 0.0});
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double t = static_cast<double>(j) / n;
    if (t >= horizon) break;
    if (values[j] > u) pm.add(t);
  }
  return pm;
}

PointMeasure build_repp2(std::span<const double> values, const ThresholdScheme& ts, double tau_max,
                         double horizon) {
  PointMeasure pm(1, Window{horizon, tau_max});
  const double n = ts.n();
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double t = static_cast<double>(j) / n;
    if (t >= horizon) break;
    const double mark = ts.tau_of(values[j]);
    if (mark <= tau_max) pm.add(t, mark);
  }
  return pm;
}

PointMeasure build_repp_multi(const std::vector<std::vector<double>>& positions,
                              const ThresholdScheme& ts, double radius, double horizon) {
  const ObservableSpec& obs = ts.observable();
  const int d = obs.dimension();
  PointMeasure pm(d, Window{horizon, radius});
  const double scale = ts.chart_scale();
  std::vector<double> zeta;
  for (const auto& z : obs.zeta) zeta.push_back(z.to_double() - std::floor(z.to_double()));
  std::vector<double> mark(static_cast<std::size_t>(d));
  for (std::size_t j = 0; j < positions.size(); ++j) {
    const double t = static_cast<double>(j) / ts.n();
    if (t >= horizon) break;
    double sq = 0.0;
    for (int c = 0; c < d; ++c) {
      double off = positions[j][static_cast<std::size_t>(c)] - zeta[static_cast<std::size_t>(c)];
      off -= std::floor(off + 0.5);
      mark[static_cast<std::size_t>(c)] = off * scale;
      sq += mark[static_cast<std::size_t>(c)] * mark[static_cast<std::size_t>(c)];
    }
    if (std::sqrt(sq) < radius) pm.add(t, mark);
  }
  return pm;
}

PointMeasure repp1_from_hits(const OrbitHits& hits, double tau) {
  PointMeasure pm(0, Window{hits.horizon, 0.0});
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (hits.index[i] < hits.length && hits.mark[i] < tau)
      pm.add(static_cast<double>(hits.index[i]) / hits.n);
  return pm;
}

PointMeasure repp2_from_hits(const OrbitHits& hits, bool include_lookahead) {
  PointMeasure pm(1, Window{hits.horizon, hits.mark_cap});
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (include_lookahead || hits.index[i] < hits.length)
      pm.add(static_cast<double>(hits.index[i]) / hits.n, hits.mark[i]);
  return pm;
}

PointMeasure repp_multi_from_hits(const OrbitHits& hits, double chart_scale, double radius) {
  if (hits.offset.size() != hits.size() * static_cast<std::size_t>(hits.dim))
    throw StateError("orbit run did not keep offsets");
  PointMeasure pm(hits.dim, Window{hits.horizon, radius});
  std::vector<double> mark(static_cast<std::size_t>(hits.dim));
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits.index[i] >= hits.length) continue;
    double sq = 0.0;
    for (int c = 0; c < hits.dim; ++c) {
      const double v = hits.offset[i * static_cast<std::size_t>(hits.dim) + static_cast<std::size_t>(c)] * chart_scale;
      mark[static_cast<std::size_t>(c)] = v;
      sq += v * v;
    }
    if (std::sqrt(sq) < radius) pm.add(static_cast<double>(hits.index[i]) / hits.n, mark);
  }
  return pm;
}

// ---------------------------------------------------------------------------
// A^(q) and q

RationalIntervalUnion aq_set(const RationalIntervalUnion& a, const SystemSpec& spec, int q) {
  if (q < 0) throw DomainError("q must be nonnegative");
  RationalIntervalUnion out = a;
  RationalIntervalUnion back = a;
  for (int i = 1; i <= q && !out.empty(); ++i) {
    back = preimage(spec, back);
    out = out.subtract(back);
  }
  return out;
}

int q_prime(int period, double tau_lo, double tau_hi, double log_det) {
  if (!(tau_lo > 0.0 && tau_lo < tau_hi)) throw DomainError("q' needs 0 < tau_lo < tau_hi");
  if (!(log_det > 0.0)) throw DomainError("q' needs an expanding periodic point");
  return period * static_cast<int>(std::ceil((std::log(tau_hi) - std::log(tau_lo)) / log_det - 1e-12));
}

namespace {

std::vector<double> default_ladder() {
  std::vector<double> out;
  for (int e = 10; e <= 20; e += 2) out.push_back(std::ldexp(1.0, e));
  return out;
}

bool qualifies(const std::vector<std::optional<std::uint64_t>>& prof) {
  // none == +infinity; require nondecreasing and growth by >= 2 overall.
  auto val = [](const std::optional<std::uint64_t>& v) {
    return v ? static_cast<double>(*v) : std::numeric_limits<double>::infinity();
  };
  for (std::size_t i = 1; i < prof.size(); ++i)
    if (val(prof[i]) < val(prof[i - 1])) return false;
  return val(prof.back()) >= val(prof.front()) + 2.0;
}

std::string describe(const ChooseQResult& r) {
  std::ostringstream os;
  for (const auto& [j, prof] : r.profile) {
    os << " j=" << j << ":";
    for (const auto& v : prof) os << ' ' << (v ? std::to_string(*v) : std::string("none"));
  }
  return os.str();
}

}  // namespace

ChooseQResult choose_q(const SystemSpec& spec, const ObservableSpec& obs,
                       const ChooseQOptions& opt) {
  const auto ladder = opt.n_ladder.empty() ? default_ladder() : opt.n_ladder;
  if (ladder.size() < 2) throw DomainError("choose_q needs at least two ladder values");
  if (!(opt.tau_lo >= 0 && opt.tau_lo < opt.tau_hi)) throw DomainError("choose_q needs 0 <= tau_lo < tau_hi");

  std::vector<int> candidates;
  if (opt.period > 0) {
    int start = 0;
    if (opt.tau_lo > 0) {
      const Eigen::MatrixXd jac = jacobian_at(spec, obs.zeta, opt.period);
      start = q_prime(opt.period, to_double(opt.tau_lo), to_double(opt.tau_hi),
                      std::log(std::abs(jac.determinant())));
    } else {
      candidates.push_back(0);
      start = opt.period;
    }
    for (int j = start; j <= opt.max_q; j += opt.period) candidates.push_back(j);
  } else {
    for (int j = 0; j <= opt.max_q; ++j) candidates.push_back(j);
  }

  ChooseQResult result;
  for (int j : candidates) {
    std::vector<std::optional<std::uint64_t>> prof;
    for (double n : ladder) {
      const ThresholdScheme ts = ThresholdScheme::analytic(obs, n);
      const auto a_n = ts.band_preimage(RationalIntervalUnion::single(opt.tau_lo, opt.tau_hi));
      const auto core = aq_set(a_n, spec, j);
      prof.push_back(core.empty() ? std::nullopt : min_return_time(spec, core, opt.horizon));
    }
    result.profile.emplace_back(j, prof);
    if (qualifies(prof)) {
      result.q = j;
      return result;
    }
  }
  throw DomainError("no q <= " + std::to_string(opt.max_q) +
                    " has diverging return times; profile:" + describe(result));
}

Rational shift_overlap(int base, const RationalIntervalUnion& a, const RationalIntervalUnion& b,
                       int j) {
  BigInt bj = 1;
  for (int i = 0; i < j; ++i) bj *= base;
  const Rational scale(bj);
  const Rational mb = b.measure();
  Rational total(0);
  for (const auto& iv : a) {
    const Rational lo = iv.lo * scale;
    const Rational hi = iv.hi * scale;
    const Rational len = hi - lo;
    const Rational wraps = floor_scalar(len);
    Rational part = wraps * mb;
    const Rational start = lo + wraps;
    if (start < hi) part += RationalIntervalUnion::single(start, hi).wrapped().intersect(b).measure();
    total += part / scale;
  }
  return total;
}

Rational dprime_diagnostic(const SystemSpec& spec, const RationalIntervalUnion& a_n, int q,
                           std::uint64_t n, std::uint64_t k_n) {
  if (k_n == 0 || k_n > n) throw DomainError("k_n must lie in [1, n]");
  const RationalIntervalUnion core = aq_set(a_n, spec, q);
  if (core.empty()) return Rational(0);
  const std::uint64_t terms = n / k_n;
  Rational sum(0);
  if (spec.kind == SystemKind::DigitShift && spec.dimension == 1) {
    for (std::uint64_t j = 1; j + 1 <= terms; ++j)
      sum += shift_overlap(spec.bases[0], core, core, static_cast<int>(j));
  } else {
    RationalIntervalUnion back = core;
    for (std::uint64_t j = 1; j + 1 <= terms; ++j) {
      back = preimage(spec, back);
      sum += core.intersect(back).measure();
    }
  }
  return Rational(static_cast<long long>(n)) * sum;
}

// ---------------------------------------------------------------------------
// Clusters

std::uint64_t ClusterSummary::exceedances() const {
  std::uint64_t s = 0;
  for (auto v : sizes) s += v;
  return s;
}

void ClusterSummary::merge(const ClusterSummary& other) {
  start_times.insert(start_times.end(), other.start_times.begin(), other.start_times.end());
  sizes.insert(sizes.end(), other.sizes.begin(), other.sizes.end());
  marks.insert(marks.end(), other.marks.begin(), other.marks.end());
  runs.insert(runs.end(), other.runs.begin(), other.runs.end());
  q = other.q;
}

namespace {

Estimate ratio_estimate(const std::vector<RunTotals>& runs, bool aq) {
  double num = 0.0, den = 0.0;
  for (const auto& r : runs) {
    num += static_cast<double>(aq ? r.aq_hits : r.clusters);
    den += static_cast<double>(r.exceedances);
  }
  if (den == 0.0) return {0.0, 0.0};
  const double theta = num / den;
  double ss = 0.0;
  for (const auto& r : runs) {
    const double resid = static_cast<double>(aq ? r.aq_hits : r.clusters) -
                         theta * static_cast<double>(r.exceedances);
    ss += resid * resid;
  }
  const double m = static_cast<double>(runs.size());
  const double se = m > 1 ? std::sqrt(ss * m / (m - 1.0)) / den : 0.0;
  return {theta, se};
}

}  // namespace

void ClusterSummary::finalize() {
  theta_aq = ratio_estimate(runs, true);
  theta_clusters = ratio_estimate(runs, false);
}

nlohmann::json ClusterSummary::to_json(bool with_clusters) const {
  nlohmann::json j;
  j["q"] = q;
  j["runs"] = runs.size();
  j["exceedances"] = exceedances();
  j["clusters"] = sizes.size();
  j["theta_aq"] = {{"value", theta_aq.value}, {"se", theta_aq.se}};
  j["theta_clusters"] = {{"value", theta_clusters.value}, {"se", theta_clusters.se}};
  if (with_clusters) {
    j["start_times"] = start_times;
    j["sizes"] = sizes;
    j["marks"] = marks;
  }
  return j;
}

ClusterSummary clusters(std::span<const std::uint64_t> exceedances, std::span<const double> marks,
                        std::uint64_t q, std::uint64_t length, double n) {
  if (!marks.empty() && marks.size() != exceedances.size())
    throw DomainError("one mark per exceedance is required");
  ClusterSummary out;
  out.q = q;
  RunTotals totals;
  for (std::size_t i = 0; i < exceedances.size(); ++i) {
    const std::uint64_t j = exceedances[i];
    if (i > 0 && j <= exceedances[i - 1]) throw DomainError("exceedance indices must increase");
    if (j >= length) break;
    ++totals.exceedances;
    const bool next_close = i + 1 < exceedances.size() && exceedances[i + 1] - j <= q;
    if (!next_close) ++totals.aq_hits;
    const bool joins = i > 0 && j - exceedances[i - 1] <= q;
    if (!joins) {
      out.start_times.push_back(static_cast<double>(j) / n);
      out.sizes.push_back(0);
      out.marks.emplace_back();
      ++totals.clusters;
    }
    ++out.sizes.back();
    if (!marks.empty()) out.marks.back().push_back(marks[i]);
  }
  out.runs.push_back(totals);
  out.finalize();
  return out;
}

ClusterSummary clusters_from_hits(const OrbitHits& hits, double tau, std::uint64_t q) {
  std::vector<std::uint64_t> idx;
  std::vector<double> marks;
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (hits.mark[i] < tau) {
      idx.push_back(hits.index[i]);
      marks.push_back(hits.mark[i]);
    }
  return clusters(idx, marks, q, hits.length, hits.n);
}

// ---------------------------------------------------------------------------
// Void probabilities

VoidEstimate wilson(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw DataError("Wilson interval of an empty sample");
  VoidEstimate v;
  v.runs = trials;
  v.voids = successes;
  const double m = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / m;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * m)) / (1 + z2 / m);
  const double half = z * std::sqrt(p * (1 - p) / m + z2 / (4 * m * m)) / (1 + z2 / m);
  v.p = p;
  v.lo = std::max(0.0, centre - half);
  v.hi = std::min(1.0, centre + half);
  return v;
}

VoidEstimate void_frequency(const std::vector<PointMeasure>& ensemble, const RectangleFamily& fam) {
  if (ensemble.empty()) throw DataError("void frequency of an empty ensemble");
  std::uint64_t voids = 0;
  for (const auto& pm : ensemble) {
    const auto counts = count_in(pm, fam);
    if (std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; })) ++voids;
  }
  return wilson(voids, ensemble.size());
}

std::vector<std::uint64_t> count_in_aq(const PointMeasure& pm, const RectangleFamily& fam,
                                       std::uint64_t q, double n) {
  std::vector<std::uint64_t> counts(fam.cells.size(), 0);
  const auto& times = pm.times();
  const double reach = (static_cast<double>(q) + 0.5) / n;
  for (std::size_t k = 0; k < fam.cells.size(); ++k) {
    const Cell& cell = fam.cells[k];
    auto it = std::lower_bound(times.begin(), times.end(), cell.a);
    for (auto i = static_cast<std::size_t>(it - times.begin()); i < pm.size() && pm.time(i) < cell.b; ++i) {
      if (!cell.contains_mark(pm.marks(i))) continue;
      bool returns = false;
      for (std::size_t r = i + 1; r < pm.size() && pm.time(r) - pm.time(i) < reach; ++r)
        if (pm.time(r) > pm.time(i) && cell.contains_mark(pm.marks(r))) {
          returns = true;
          break;
        }
      if (!returns) ++counts[k];
    }
  }
  return counts;
}

VoidEstimate void_frequency_aq(const std::vector<PointMeasure>& ensemble,
                               const RectangleFamily& fam, std::uint64_t q, double n) {
  if (ensemble.empty()) throw DataError("void frequency of an empty ensemble");
  std::uint64_t voids = 0;
  for (const auto& pm : ensemble) {
    const auto counts = count_in_aq(pm, fam, q, n);
    if (std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; })) ++voids;
  }
  return wilson(voids, ensemble.size());
}

}  // namespace repp
