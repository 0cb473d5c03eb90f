#include "repp/observables.hpp"

#include "repp/digit_orbit.hpp"
#include "repp/errors.hpp"
#include "repp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace repp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double circle_offset(double x, double z) {
  double d = x - z;
  d -= std::floor(d + 0.5);
  return d;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(GKind k) {
  switch (k) {
    case GKind::G1: return "g1";
    case GKind::G2: return "g2";
    case GKind::G3: return "g3";
    case GKind::TwoSite: return "two_site";
  }
  return "unknown";
}

ObservableSpec ObservableSpec::g1(std::vector<ExactReal> zeta) {
  ObservableSpec o;
  o.zeta = std::move(zeta);
  o.g = GKind::G1;
  o.validate();
  return o;
}

ObservableSpec ObservableSpec::g2(std::vector<ExactReal> zeta, double a) {
  ObservableSpec o;
  o.zeta = std::move(zeta);
  o.g = GKind::G2;
  o.a = a;
  o.validate();
  return o;
}

ObservableSpec ObservableSpec::g3(std::vector<ExactReal> zeta, double a, double c) {
  ObservableSpec o;
  o.zeta = std::move(zeta);
  o.g = GKind::G3;
  o.a = a;
  o.c = c;
  o.validate();
  return o;
}

ObservableSpec ObservableSpec::two_site() {
  ObservableSpec o;
  o.zeta = {ExactReal::pi_multiple(Rational(1, 16))};
  o.g = GKind::TwoSite;
  return o;
}

std::vector<std::vector<ExactReal>> ObservableSpec::sites() const {
  if (g == GKind::TwoSite)
    return {{ExactReal::pi_multiple(Rational(1, 16))}, {ExactReal::pi_multiple(Rational(3, 16))}};
  return {zeta};
}

void ObservableSpec::validate() const {
  if (zeta.empty()) throw ConfigError("observable needs a point zeta");
  if (g == GKind::TwoSite) {
    if (zeta.size() != 1 || !(zeta[0] == ExactReal::pi_multiple(Rational(1, 16))))
      throw ConfigError("two_site observable is defined at zeta = pi/16 only");
    return;
  }
  if ((g == GKind::G2 || g == GKind::G3) && !(a > 0.0))
    throw ConfigError("observable exponent a must be positive");
  double prev = g_of(1e-12);
  for (double y = 1e-11; y < 0.5; y *= 10.0) {
    const double v = g_of(y);
    if (!(v < prev)) throw ConfigError("g is not strictly decreasing near 0");
    prev = v;
  }
}

double ObservableSpec::g_of(double y) const {
  switch (g) {
    case GKind::G1: return y > 0.0 ? -std::log(y) : kInf;
    case GKind::G2: return y > 0.0 ? std::pow(y, -1.0 / a) : kInf;
    case GKind::G3: return c - std::pow(y, 1.0 / a);
    case GKind::TwoSite: return 1.0 - 100.0 * y;
  }
  return 0.0;
}

double ObservableSpec::g_inverse(double u) const {
  switch (g) {
    case GKind::G1: return std::exp(-u);
    case GKind::G2: return u > 0.0 ? std::pow(u, -a) : kInf;
    case GKind::G3: return u < c ? std::pow(c - u, a) : 0.0;
    case GKind::TwoSite: return u < 1.0 ? (1.0 - u) / 100.0 : 0.0;
  }
  return 0.0;
}

KeyValueBlock ObservableSpec::to_kv() const {
  KeyValueBlock kv;
  kv.set("g", to_string(g));
  kv.set("zeta", point_to_string(zeta));
  if (g == GKind::G2 || g == GKind::G3) kv.set("a", format_double(a));
  if (g == GKind::G3) kv.set("c", format_double(c));
  return kv;
}

ObservableSpec ObservableSpec::from_kv(const KeyValueBlock& kv) {
  kv.require_only({"g", "zeta", "a", "c", "kind", "bases", "branches", "alpha", "measure"},
                  "observable block");
  const std::string g = kv.get_or("g", "g1");
  if (g == "two_site") {
    ObservableSpec o = two_site();
    if (auto z = kv.find("zeta")) {
      o.zeta = parse_point(*z);
      o.validate();
    }
    return o;
  }
  ObservableSpec o;
  o.zeta = parse_point(kv.get("zeta"));
  o.a = kv.get_double_or("a", 1.0);
  o.c = kv.get_double_or("c", 1.0);
  if (g == "g1")
    o.g = GKind::G1;
  else if (g == "g2")
    o.g = GKind::G2;
  else if (g == "g3")
    o.g = GKind::G3;
  else
    throw ConfigError("unknown observable kind '" + g + "'");
  o.validate();
  return o;
}

double torus_distance(const std::vector<double>& x, const std::vector<double>& y) {
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = circle_offset(x[i], y[i]);
    sq += d * d;
  }
  return std::sqrt(sq);
}

namespace {

std::vector<double> to_doubles(const std::vector<ExactReal>& p) {
  std::vector<double> out;
  for (const auto& v : p) {
    double d = v.to_double();
    out.push_back(d - std::floor(d));
  }
  return out;
}

}  // namespace

double evaluate(const ObservableSpec& obs, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != obs.dimension())
    throw DomainError("point dimension does not match the observable");
  if (obs.g == GKind::TwoSite) {
    const double d1 = std::abs(circle_offset(x[0], std::numbers::pi / 16.0));
    const double d2 = std::abs(circle_offset(x[0], 3.0 * std::numbers::pi / 16.0));
    return std::max(0.0, 1.0 - 100.0 * d1) + std::max(0.0, 1.0 - 10.0 * d2);
  }
  return obs.g_of(torus_distance(x, to_doubles(obs.zeta)));
}

std::vector<double> exceedance_radii(const ObservableSpec& obs, double u) {
  if (obs.g == GKind::TwoSite) {
    if (u >= 1.0) return {0.0, 0.0};
    return {(1.0 - u) / 100.0, (1.0 - u) / 10.0};
  }
  return {obs.g_inverse(u)};
}

IntervalUnion exceedance_set(const ObservableSpec& obs, double u) {
  if (obs.dimension() != 1)
    throw UnsupportedError("exceedance sets as interval unions need a one-dimensional observable");
  if (obs.g == GKind::TwoSite && u < 0.0) return IntervalUnion::single(0.0, 1.0);
  const auto radii = exceedance_radii(obs, u);
  const auto sites = obs.sites();
  IntervalUnion out;
  for (std::size_t s = 0; s < sites.size(); ++s) {
    double z = sites[s][0].to_double();
    z -= std::floor(z);
    out = out.unite(circle_ball(z, std::min(radii[s], 0.5)));
  }
  return out;
}

BallMeasureTable::BallMeasureTable(std::vector<double> sorted_distances,
                                   std::uint64_t orbit_length)
    : distances_(std::move(sorted_distances)), length_(orbit_length) {
  std::sort(distances_.begin(), distances_.end());
}

double BallMeasureTable::measure(double r) const {
  if (length_ == 0) throw StateError("ball measure table is empty");
  const auto k = std::lower_bound(distances_.begin(), distances_.end(), r) - distances_.begin();
  return static_cast<double>(k) / static_cast<double>(length_);
}

double BallMeasureTable::standard_error(double r) const {
  const double p = measure(r);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(length_));
}

double BallMeasureTable::smallest_visited_radius() const {
  if (distances_.empty()) throw StateError("ball measure table is empty");
  return distances_.front();
}

double BallMeasureTable::radius_for(double mass, std::string* warning) const {
  if (length_ == 0 || distances_.empty()) throw StateError("ball measure table is empty");
  const double pos = mass * static_cast<double>(length_);
  if (pos < 1.0) {
    if (warning)
      *warning = "no calibration visit below mass " + format_double(mass) +
                 "; radius widened to the first visited distance";
    return distances_.front() * std::max(pos, 0.0);
  }
  const std::size_t k = static_cast<std::size_t>(std::floor(pos));
  if (k >= distances_.size()) return distances_.back();
  const double lo = distances_[k - 1];
  const double hi = distances_[k];
  return lo + (hi - lo) * (pos - static_cast<double>(k));
}

BallMeasureTable calibrate_birkhoff(const SystemSpec& spec, const ObservableSpec& obs,
                                    std::uint64_t m, std::uint64_t seed) {
  if (m < 100000) throw DomainError("Birkhoff calibration needs an orbit of at least 10^5 points");
  if (spec.dimension != obs.dimension())
    throw DomainError("observable dimension does not match the system");
  std::vector<double> dist;
  dist.reserve(m);
  if (spec.kind == SystemKind::DigitShift) {
    const int k = suggested_resolution(*std::min_element(spec.bases.begin(), spec.bases.end()),
                                       static_cast<double>(m), 1e-3);
    DigitStreamOrbit orbit(spec, {obs.zeta}, k, seed);
    const double radius[] = {1.0};
    orbit.scan(m, radius, [&](const OrbitHit& h) { dist.push_back(h.distance); });
  } else {
    Engine eng(derive_seed(seed, 0));
    std::vector<double> x0;
    for (int c = 0; c < spec.dimension; ++c) x0.push_back(uniform01(eng));
    const auto zeta = to_doubles(obs.zeta);
    std::vector<double> x = x0;
    Engine dither(derive_seed(seed, 1));
    for (std::uint64_t i = 0; i < m; ++i) {
      dist.push_back(torus_distance(x, zeta));
      x = apply_float(spec, x);
      for (double& v : x) {
        v += (uniform01(dither) - 0.5) * 0x1.0p-51;
        v -= std::floor(v);
        if (v >= 1.0) v = 0.0;
      }
    }
  }
  return BallMeasureTable(std::move(dist), m);
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

ThresholdScheme ThresholdScheme::analytic(const ObservableSpec& obs, double n, double density) {
  if (!(n > 0.0)) throw DomainError("n must be positive");
  if (!(density > 0.0)) throw DomainError("density at zeta must be positive");
  ThresholdScheme ts;
  ts.obs_ = obs;
  ts.n_ = n;
  ts.model_ = MeasureModel::AnalyticDensity;
  ts.density_ = density;
  if (obs.g == GKind::TwoSite) {
    // n mu(phi > z) = n (2/100 + 2/10)(1 - z); a point at distance rho from
    // site 1 has 1 - z = 100 rho, from site 2 has 1 - z = 10 rho.
    ts.kappa_ = {22.0 * n * density, 2.2 * n * density};
  } else {
    ts.kappa_ = {n * density * unit_ball_volume(obs.dimension())};
  }
  return ts;
}

ThresholdScheme ThresholdScheme::birkhoff(const ObservableSpec& obs, double n,
                                          std::optional<BallMeasureTable> table) {
  if (!(n > 0.0)) throw DomainError("n must be positive");
  if (obs.g == GKind::TwoSite)
    throw UnsupportedError("the two-site observable uses the analytic model");
  ThresholdScheme ts;
  ts.obs_ = obs;
  ts.n_ = n;
  ts.model_ = MeasureModel::BirkhoffEmpirical;
  ts.table_ = std::move(table);
  return ts;
}

double ThresholdScheme::threshold(double tau) const {
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  if (obs_.g == GKind::TwoSite) return 1.0 - tau / kappa_[0] * 100.0;
  return obs_.g_of(radius(tau, 0));
}

double ThresholdScheme::tau_of(double z) const {
  if (obs_.g == GKind::TwoSite) return z >= 1.0 ? 0.0 : 0.22 * n_ * density_ * (1.0 - z);
  const double r = obs_.g_inverse(z);
  if (model_ == MeasureModel::BirkhoffEmpirical) {
    if (!table_) throw StateError("Birkhoff threshold scheme has no calibration table");
    return n_ * table_->measure(r);
  }
  return kappa_[0] * std::pow(r, obs_.dimension());
}

double ThresholdScheme::mark_of_distance(int site, double rho) const {
  if (model_ == MeasureModel::BirkhoffEmpirical) {
    if (!table_) throw StateError("Birkhoff threshold scheme has no calibration table");
    return n_ * table_->measure(rho);
  }
  return kappa_.at(static_cast<std::size_t>(site)) * std::pow(rho, obs_.dimension());
}

double ThresholdScheme::radius(double tau, int site) const {
  if (model_ == MeasureModel::BirkhoffEmpirical) {
    if (!table_) throw StateError("Birkhoff threshold scheme has no calibration table");
    return table_->radius_for(tau / n_);
  }
  return std::pow(tau / kappa_.at(static_cast<std::size_t>(site)), 1.0 / obs_.dimension());
}

Rational ThresholdScheme::radius_exact(const Rational& tau, int site) const {
  if (model_ != MeasureModel::AnalyticDensity || obs_.dimension() != 1)
    throw UnsupportedError("exact radii need a one-dimensional analytic scheme");
  const Rational n(n_);
  const Rational density(density_);
  if (obs_.g == GKind::TwoSite)
    return site == 0 ? tau / (22 * n * density) : tau * 10 / (22 * n * density);
  return tau / (2 * n * density);
}

RationalIntervalUnion ThresholdScheme::band_preimage(const RationalIntervalUnion& tau_set) const {
  const auto sites = obs_.sites();
  RationalIntervalUnion out;
  for (std::size_t s = 0; s < sites.size(); ++s) {
    Rational center = sites[s][0].approx(48);
    center -= floor_scalar(center);
    for (const auto& band : tau_set) {
      if (band.lo < 0) throw DomainError("tau bands must be nonnegative");
      const Rational r2 = radius_exact(band.hi, static_cast<int>(s));
      const Rational r1 = radius_exact(band.lo, static_cast<int>(s));
      if (r2 >= Rational(1, 2)) throw DomainError("tau band reaches beyond half the circle");
      out = out.unite(circle_ball(center, r2).subtract(circle_ball(center, r1)));
    }
  }
  return out;
}

double ThresholdScheme::chart_scale() const {
  const int d = obs_.dimension();
  return 1.0 / (radius(1.0, 0) * std::pow(unit_ball_volume(d), 1.0 / d));
}

}  // namespace repp
