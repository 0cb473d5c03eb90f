#include "repp/nu.hpp"

#include "repp/empirical.hpp"
#include "repp/errors.hpp"
#include "repp/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace repp {

namespace {

constexpr double kTailFraction = 1e-15;
constexpr int kMaxTerms = 4000;

void require_marks(const IntervalUnion& a) {
  if (a.empty()) return;
  if (a.inf() < 0.0) throw DomainError("nu is defined on subsets of [0, inf)");
  if (!std::isfinite(a.sup())) throw DomainError("nu needs a bounded set");
}

// |A \ U_{j>=1} A / c_j| for an increasing factor sequence c_j (c_j > 1).
template <typename Factor>
double excluded_measure(const IntervalUnion& a, Factor&& factor) {
  if (a.empty()) return 0.0;
  const double total = a.measure();
  IntervalUnion removed;
  for (int j = 1; j <= kMaxTerms; ++j) {
    const double c = factor(j);
    if (!(c > 0.0) || !std::isfinite(c)) break;
    if (a.inf() > 0.0 && a.sup() / c <= a.inf() && c > 1.0) break;
    if (a.inf() == 0.0 && total / c < kTailFraction * total && c > 1.0) break;
    removed = removed.unite(a.scaled(1.0 / c));
  }
  return a.subtract(removed).measure();
}

bool is_diagonal(const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

double radial_nu(const Eigen::MatrixXd& m, const IntervalUnion& a) {
  if (a.empty()) return 0.0;
  const Eigen::MatrixXd minv = m.inverse();
  auto integrand = [&](double phi) {
    // Powers of M^{-1} applied to e_phi, accumulated incrementally.
    Eigen::Vector2d v(std::cos(phi), std::sin(phi));
    std::vector<double> factors;
    for (int j = 1; j <= kMaxTerms; ++j) {
      v = minv * v;
      const double c = v.squaredNorm();
      factors.push_back(c);
      if (a.inf() > 0.0 && a.sup() / c <= a.inf() && c > 1.0) break;
      if (a.inf() == 0.0 && 1.0 / c < kTailFraction && c > 1.0) break;
    }
    IntervalUnion removed;
    for (double c : factors) removed = removed.unite(a.scaled(1.0 / c));
    return a.subtract(removed).measure();
  };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, 2.0 * std::numbers::pi, 12, 1e-11);
  return integral / (2.0 * std::numbers::pi);
}

std::vector<Eigen::Vector2d> clip(const std::vector<Eigen::Vector2d>& poly, int axis, double bound,
                                  bool keep_above) {
  std::vector<Eigen::Vector2d> out;
  const std::size_t n = poly.size();
  auto inside = [&](const Eigen::Vector2d& p) {
    return keep_above ? p[axis] >= bound : p[axis] <= bound;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& cur = poly[i];
    const Eigen::Vector2d& prev = poly[(i + n - 1) % n];
    const bool ci = inside(cur), pi = inside(prev);
    if (ci != pi) {
      const double t = (bound - prev[axis]) / (cur[axis] - prev[axis]);
      out.push_back(prev + t * (cur - prev));
    }
    if (ci) out.push_back(cur);
  }
  return out;
}

std::vector<Eigen::Vector2d> clip_to_box(std::vector<Eigen::Vector2d> poly, const Box& b) {
  for (int axis = 0; axis < 2 && !poly.empty(); ++axis) {
    poly = clip(poly, axis, b.lo[static_cast<std::size_t>(axis)], true);
    if (!poly.empty()) poly = clip(poly, axis, b.hi[static_cast<std::size_t>(axis)], false);
  }
  return poly;
}

double linear_boxes(const Eigen::MatrixXd& m, const BoxUnion& g) {
  if (g.empty()) return 0.0;
  const int d = g.dimension();
  if (m.rows() != d || m.cols() != d) throw DomainError("matrix dimension does not match the set");
  const double total = g.measure();
  const double det = std::abs(m.determinant());
  const Box bb = g.bounding_box();

  if (is_diagonal(m)) {
    std::vector<double> scale(static_cast<std::size_t>(d), 1.0);
    std::vector<Box> removed;
    for (int j = 1; j <= kMaxTerms && std::pow(det, j) >= kTailFraction; ++j) {
      for (int i = 0; i < d; ++i) scale[static_cast<std::size_t>(i)] *= m(i, i);
      if (bb.scaled(scale).intersect(bb).empty()) continue;
      for (const auto& b : g.boxes()) removed.push_back(b.scaled(scale));
    }
    return difference_measure(g, BoxUnion(std::move(removed)));
  }

  if (d != 2) throw UnsupportedError("non-diagonal linear families are implemented for d = 2 only");
  double box_sum = 0.0;
  for (const auto& b : g.boxes()) box_sum += b.volume();
  if (std::abs(box_sum - total) > 1e-12 * std::max(1.0, total))
    throw DomainError("non-diagonal linear families need disjoint boxes");
  double result = 0.0;
  for (const auto& target : g.boxes()) {
    std::vector<std::vector<Eigen::Vector2d>> polys;
    Eigen::MatrixXd mj = Eigen::MatrixXd::Identity(2, 2);
    for (int j = 1; j <= kMaxTerms; ++j) {
      mj = m * mj;
      if (std::pow(det, j) < kTailFraction) break;
      for (const auto& b : g.boxes()) {
        std::vector<Eigen::Vector2d> corners = {
            {b.lo[0], b.lo[1]}, {b.hi[0], b.lo[1]}, {b.hi[0], b.hi[1]}, {b.lo[0], b.hi[1]}};
        for (auto& p : corners) p = mj * p;
        auto clipped = clip_to_box(corners, target);
        if (clipped.size() >= 3) polys.push_back(std::move(clipped));
      }
    }
    result += target.volume() - polygon_union_area(polys);
  }
  return result;
}

}  // namespace

std::string to_string(NuKind k) {
  switch (k) {
    case NuKind::Lebesgue: return "lebesgue";
    case NuKind::ContractionGeometric: return "contraction_geometric";
    case NuKind::LinearFamily: return "linear_family";
    case NuKind::Mixture: return "mixture";
  }
  return "unknown";
}

OuterMeasureSpec OuterMeasureSpec::lebesgue() { return {}; }

OuterMeasureSpec OuterMeasureSpec::contraction(double lambda) {
  OuterMeasureSpec s;
  s.kind = NuKind::ContractionGeometric;
  s.lambda = lambda;
  s.validate();
  return s;
}

OuterMeasureSpec OuterMeasureSpec::linear(Eigen::MatrixXd m, bool radial) {
  OuterMeasureSpec s;
  s.kind = NuKind::LinearFamily;
  s.m = std::move(m);
  s.radial = radial;
  s.validate();
  return s;
}

OuterMeasureSpec OuterMeasureSpec::mixture(MixtureTerm first, MixtureTerm second) {
  OuterMeasureSpec s;
  s.kind = NuKind::Mixture;
  s.terms = {first, second};
  s.validate();
  return s;
}

void OuterMeasureSpec::validate() const {
  switch (kind) {
    case NuKind::Lebesgue: break;
    case NuKind::ContractionGeometric:
      if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("contraction factor must lie in (0,1)");
      break;
    case NuKind::LinearFamily:
      if (m.rows() < 1 || m.rows() != m.cols()) throw DomainError("linear family needs a square matrix");
      if (!(std::abs(m.determinant()) < 1.0) || m.determinant() == 0.0)
        throw DomainError("linear family needs 0 < |det M| < 1");
      if (radial && m.rows() != 2) throw DomainError("radial linear families are two-dimensional");
      break;
    case NuKind::Mixture:
      if (terms.size() != 2) throw DomainError("mixture needs exactly two terms");
      for (const auto& t : terms) {
        if (!(t.weight > 0.0)) throw DomainError("mixture weights must be positive");
        if (t.scale < 0.0) throw DomainError("mixture scales must be positive (0 = identity)");
      }
      break;
  }
}

nlohmann::json OuterMeasureSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  if (kind == NuKind::ContractionGeometric) j["lambda"] = lambda;
  if (kind == NuKind::LinearFamily) {
    std::vector<std::vector<double>> rows;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      rows.emplace_back();
      for (Eigen::Index c = 0; c < m.cols(); ++c) rows.back().push_back(m(r, c));
    }
    j["matrix"] = rows;
    j["radial"] = radial;
  }
  if (kind == NuKind::Mixture) {
    j["terms"] = nlohmann::json::array();
    for (const auto& t : terms) j["terms"].push_back({{"weight", t.weight}, {"scale", t.scale}});
  }
  return j;
}

OuterMeasureSpec OuterMeasureSpec::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lebesgue") return lebesgue();
  if (kind == "contraction_geometric") return contraction(j.at("lambda").get<double>());
  if (kind == "linear_family") {
    const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows.size()) throw ConfigError("matrix must be square");
      for (std::size_t c = 0; c < rows.size(); ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return linear(m, j.value("radial", false));
  }
  if (kind == "mixture") {
    const auto& t = j.at("terms");
    if (t.size() != 2) throw ConfigError("mixture needs two terms");
    return mixture({t[0].at("weight").get<double>(), t[0].at("scale").get<double>()},
                   {t[1].at("weight").get<double>(), t[1].at("scale").get<double>()});
  }
  throw ConfigError("unknown outer measure kind '" + kind + "'");
}

double nu_eval(const OuterMeasureSpec& spec, const IntervalUnion& a) {
  spec.validate();
  require_marks(a);
  switch (spec.kind) {
    case NuKind::Lebesgue: return a.measure();
    case NuKind::ContractionGeometric: {
      const double inv = 1.0 / spec.lambda;
      return excluded_measure(a, [&](int j) { return std::pow(inv, j); });
    }
    case NuKind::LinearFamily: {
      if (spec.radial) return radial_nu(spec.m, a);
      if (spec.m.rows() != 1) throw DomainError("scalar marks need a 1x1 matrix or a radial family");
      const double inv = 1.0 / std::abs(spec.m(0, 0));
      return excluded_measure(a, [&](int j) { return std::pow(inv, j); });
    }
    case NuKind::Mixture: {
      double total = 0.0;
      for (const auto& t : spec.terms) {
        if (t.scale == 0.0)
          total += t.weight * a.measure();
        else if (!a.empty())
          total += t.weight * a.subtract(a.scaled(t.scale)).measure();
      }
      return total;
    }
  }
  return 0.0;
}

Rational nu_eval_exact(const OuterMeasureSpec& spec, const RationalIntervalUnion& a,
                       const Rational& lambda) {
  if (a.empty()) return Rational(0);
  if (a.inf() < 0) throw DomainError("nu is defined on subsets of [0, inf)");
  if (spec.kind == NuKind::Lebesgue) return a.measure();
  if (spec.kind != NuKind::ContractionGeometric)
    throw UnsupportedError("exact nu is available for Lebesgue and contractions");
  if (!(lambda > 0 && lambda < 1)) throw DomainError("contraction factor must lie in (0,1)");
  if (a.inf() == 0)
    throw DomainError("exact nu needs inf(a) > 0; the union is infinite otherwise");
  RationalIntervalUnion removed;
  Rational lj = lambda;
  while (lj * a.sup() > a.inf()) {
    removed = removed.unite(a.scaled(lj));
    lj *= lambda;
  }
  return a.subtract(removed).measure();
}

double nu_eval(const OuterMeasureSpec& spec, const BoxUnion& g) {
  spec.validate();
  switch (spec.kind) {
    case NuKind::Lebesgue: return g.measure();
    case NuKind::LinearFamily:
      if (spec.radial) throw DomainError("radial families act on scalar marks");
      return linear_boxes(spec.m, g);
    default:
      throw UnsupportedError("box unions support Lebesgue and linear families");
  }
}

namespace {

McEstimate finish(double volume, double sum, double sum_sq, std::uint64_t samples) {
  const double m = static_cast<double>(samples);
  const double mean = sum / m;
  const double var = std::max(0.0, sum_sq / m - mean * mean);
  return {volume * mean, volume * std::sqrt(var / m), samples};
}

}  // namespace

McEstimate nu_monte_carlo(const OuterMeasureSpec& spec, const IntervalUnion& a,
                          std::uint64_t samples, std::uint64_t seed) {
  if (samples < 10000) throw DomainError("Monte-Carlo nu needs at least 10^4 samples");
  spec.validate();
  require_marks(a);
  if (a.empty()) return {0.0, 0.0, samples};
  Engine eng(seed);
  const double lo = a.inf(), hi = a.sup();
  double sum = 0.0, sum_sq = 0.0;
  const Eigen::MatrixXd minv = spec.kind == NuKind::LinearFamily ? Eigen::MatrixXd(spec.m.inverse())
                                                                 : Eigen::MatrixXd();
  // With every singular value of M^{-1} above 1 the factors increase in j.
  const bool expanding =
      spec.kind == NuKind::LinearFamily && spec.radial &&
      Eigen::JacobiSVD<Eigen::MatrixXd>(minv).singularValues().minCoeff() > 1.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double x = uniform(eng, lo, hi);
    double f = 0.0;
    if (a.contains(x)) {
      switch (spec.kind) {
        case NuKind::Lebesgue: f = 1.0; break;
        case NuKind::ContractionGeometric: {
          f = 1.0;
          // x in lambda^j A  <=>  x / lambda^j in A; beyond sup(A) no hit.
          for (double y = x / spec.lambda; y < hi && f > 0.0; y /= spec.lambda)
            if (a.contains(y)) f = 0.0;
          break;
        }
        case NuKind::LinearFamily: {
          f = 1.0;
          if (spec.radial) {
            const double phi = uniform(eng, 0.0, 2.0 * std::numbers::pi);
            Eigen::Vector2d v(std::cos(phi), std::sin(phi));
            for (int j = 1; j <= kMaxTerms && f > 0.0; ++j) {
              v = minv * v;
              const double y = x * v.squaredNorm();
              if (expanding && y >= hi) break;
              if (a.contains(y)) f = 0.0;
            }
          } else {
            const double inv = 1.0 / std::abs(spec.m(0, 0));
            for (double y = x * inv; y < hi && f > 0.0; y *= inv)
              if (a.contains(y)) f = 0.0;
          }
          break;
        }
        case NuKind::Mixture:
          for (const auto& t : spec.terms)
            f += t.weight * ((t.scale == 0.0 || !a.contains(x / t.scale)) ? 1.0 : 0.0);
          break;
      }
    }
    sum += f;
    sum_sq += f * f;
  }
  return finish(hi - lo, sum, sum_sq, samples);
}

McEstimate nu_monte_carlo(const OuterMeasureSpec& spec, const BoxUnion& g, std::uint64_t samples,
                          std::uint64_t seed) {
  if (samples < 10000) throw DomainError("Monte-Carlo nu needs at least 10^4 samples");
  spec.validate();
  if (g.empty()) return {0.0, 0.0, samples};
  if (spec.kind != NuKind::Lebesgue && spec.kind != NuKind::LinearFamily)
    throw UnsupportedError("box unions support Lebesgue and linear families");
  Engine eng(seed);
  const Box bb = g.bounding_box();
  const int d = g.dimension();
  double volume = bb.volume();
  const Eigen::MatrixXd minv =
      spec.kind == NuKind::LinearFamily ? Eigen::MatrixXd(spec.m.inverse()) : Eigen::MatrixXd();
  double reach = 0.0;  // largest |x| in the set
  for (int i = 0; i < d; ++i)
    reach += std::pow(std::max(std::abs(bb.lo[static_cast<std::size_t>(i)]),
                               std::abs(bb.hi[static_cast<std::size_t>(i)])), 2);
  reach = std::sqrt(reach);
  const double shrink = spec.kind == NuKind::LinearFamily
                            ? 1.0 / Eigen::JacobiSVD<Eigen::MatrixXd>(spec.m).singularValues()(0)
                            : 1.0;
  double sum = 0.0, sum_sq = 0.0;
  Eigen::VectorXd x(d);
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < d; ++i)
      x(i) = uniform(eng, bb.lo[static_cast<std::size_t>(i)], bb.hi[static_cast<std::size_t>(i)]);
    std::vector<double> xv(x.data(), x.data() + d);
    double f = g.contains(xv) ? 1.0 : 0.0;
    if (f > 0.0 && spec.kind == NuKind::LinearFamily) {
      Eigen::VectorXd y = x;
      for (int j = 1; j <= kMaxTerms; ++j) {
        y = minv * y;
        // |M^{-1} y| >= |y| / sigma_max(M); once beyond reach, stays beyond.
        if (shrink > 1.0 && y.norm() > reach) break;
        std::vector<double> yv(y.data(), y.data() + d);
        if (g.contains(yv)) {
          f = 0.0;
          break;
        }
      }
    }
    sum += f;
    sum_sq += f * f;
  }
  return finish(volume, sum, sum_sq, samples);
}

Rational empirical_nu(const SystemSpec& spec, const ThresholdScheme& ts,
                      const RationalIntervalUnion& a, int q) {
  const RationalIntervalUnion a_n = ts.band_preimage(a);
  const RationalIntervalUnion core = aq_set(a_n, spec, q);
  return Rational(ts.n()) * core.measure();
}

double polygon_union_area(const std::vector<std::vector<Eigen::Vector2d>>& polygons) {
  std::vector<double> xs;
  std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> edges;
  for (const auto& p : polygons)
    for (std::size_t i = 0; i < p.size(); ++i) {
      xs.push_back(p[i].x());
      edges.emplace_back(p[i], p[(i + 1) % p.size()]);
    }
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t k = i + 1; k < edges.size(); ++k) {
      const Eigen::Vector2d r = edges[i].second - edges[i].first;
      const Eigen::Vector2d s = edges[k].second - edges[k].first;
      const double den = r.x() * s.y() - r.y() * s.x();
      if (den == 0.0) continue;
      const Eigen::Vector2d w = edges[k].first - edges[i].first;
      const double t = (w.x() * s.y() - w.y() * s.x()) / den;
      const double u = (w.x() * r.y() - w.y() * r.x()) / den;
      if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) xs.push_back(edges[i].first.x() + t * r.x());
    }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double area = 0.0;
  std::vector<std::pair<double, double>> spans;
  for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
    const double width = xs[s + 1] - xs[s];
    if (!(width > 0.0)) continue;
    const double xm = 0.5 * (xs[s] + xs[s + 1]);
    spans.clear();
    for (const auto& p : polygons) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const Eigen::Vector2d& a = p[i];
        const Eigen::Vector2d& b = p[(i + 1) % p.size()];
        if ((a.x() <= xm && xm <= b.x()) || (b.x() <= xm && xm <= a.x())) {
          if (a.x() == b.x()) continue;
          const double y = a.y() + (xm - a.x()) / (b.x() - a.x()) * (b.y() - a.y());
          lo = std::min(lo, y);
          hi = std::max(hi, y);
        }
      }
      if (lo < hi) spans.emplace_back(lo, hi);
    }
    std::sort(spans.begin(), spans.end());
    double covered = 0.0, cur_lo = 0.0, cur_hi = 0.0;
    bool open = false;
    for (const auto& [lo, hi] : spans) {
      if (!open || lo > cur_hi) {
        if (open) covered += cur_hi - cur_lo;
        cur_lo = lo;
        cur_hi = hi;
        open = true;
      } else {
        cur_hi = std::max(cur_hi, hi);
      }
    }
    if (open) covered += cur_hi - cur_lo;
    area += width * covered;
  }
  return area;
}

}  // namespace repp
