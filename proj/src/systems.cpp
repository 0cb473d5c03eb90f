#include "repp/systems.hpp"

#include "repp/errors.hpp"
#include "repp/rng.hpp"

#include <cmath>
#include <sstream>

namespace repp {

std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::DigitShift: return "digit_shift";
    case SystemKind::PiecewiseAffine: return "piecewise_affine";
    case SystemKind::Intermittent: return "intermittent";
  }
  return "unknown";
}

SystemSpec SystemSpec::digit_shift(std::vector<int> bases) {
  SystemSpec s;
  s.kind = SystemKind::DigitShift;
  s.dimension = static_cast<int>(bases.size());
  s.bases = std::move(bases);
  s.measure = MeasureKind::LebesgueInvariant;
  s.validate();
  return s;
}

SystemSpec SystemSpec::doubling_affine() {
  return affine({{Rational(0), Rational(1, 2), Rational(2), Rational(0)},
                 {Rational(1, 2), Rational(1), Rational(2), Rational(-1)}},
                MeasureKind::LebesgueInvariant);
}

SystemSpec SystemSpec::affine(std::vector<AffineBranch> branches, MeasureKind measure) {
  SystemSpec s;
  s.kind = SystemKind::PiecewiseAffine;
  s.dimension = 1;
  s.branches = std::move(branches);
  s.measure = measure;
  s.validate();
  return s;
}

SystemSpec SystemSpec::intermittent(double alpha) {
  SystemSpec s;
  s.kind = SystemKind::Intermittent;
  s.dimension = 1;
  s.lsv_alpha = alpha;
  s.measure = MeasureKind::EmpiricalBirkhoff;
  s.validate();
  return s;
}

void SystemSpec::validate() const {
  if (dimension < 1) throw ConfigError("system dimension must be at least 1");
  switch (kind) {
    case SystemKind::DigitShift:
      if (static_cast<int>(bases.size()) != dimension)
        throw ConfigError("digit_shift needs one base per coordinate");
      for (int b : bases)
        if (b < 2) throw ConfigError("digit_shift bases must be at least 2");
      break;
    case SystemKind::PiecewiseAffine: {
      if (dimension != 1) throw ConfigError("piecewise_affine maps are one-dimensional");
      if (branches.empty()) throw ConfigError("piecewise_affine needs at least one branch");
      Rational expect(0);
      for (const auto& br : branches) {
        if (br.lo != expect)
          throw ConfigError("branch domains must partition [0,1) in order without overlap");
        if (!(br.lo < br.hi)) throw ConfigError("empty branch domain");
        if (br.slope == 0) throw ConfigError("branch slope must be nonzero");
        const Rational a = br.slope * br.lo + br.offset;
        const Rational b = br.slope * br.hi + br.offset;
        if (std::min(a, b) < 0 || std::max(a, b) > 1)
          throw ConfigError("branch image must lie in [0,1]");
        expect = br.hi;
      }
      if (expect != 1) throw ConfigError("branch domains must cover [0,1)");
      if (measure == MeasureKind::LebesgueInvariant) {
        // Lebesgue is invariant iff sum over branches of 1/|slope| on every
        // image point equals 1; for full-branch maps this is sum 1/|slope| = 1.
        Rational total(0);
        bool full = true;
        for (const auto& br : branches) {
          total += 1 / (br.slope < 0 ? -br.slope : br.slope);
          const Rational a = br.slope * br.lo + br.offset;
          const Rational b = br.slope * br.hi + br.offset;
          full = full && std::min(a, b) == 0 && std::max(a, b) == 1;
        }
        if (!full || total != 1)
          throw ConfigError("lebesgue measure declared for a map that does not preserve it");
      }
      break;
    }
    case SystemKind::Intermittent:
      if (dimension != 1) throw ConfigError("intermittent maps are one-dimensional");
      if (!(lsv_alpha > 0.0 && lsv_alpha < 1.0))
        throw ConfigError("intermittent exponent must lie in (0,1)");
      if (measure == MeasureKind::LebesgueInvariant)
        throw ConfigError("intermittent maps do not preserve Lebesgue measure");
      break;
  }
}

std::vector<AffineBranch> SystemSpec::affine_branches() const {
  if (kind == SystemKind::PiecewiseAffine) return branches;
  if (kind == SystemKind::DigitShift) {
    if (dimension != 1)
      throw UnsupportedError("interval operations need a one-dimensional system");
    const int b = bases[0];
    std::vector<AffineBranch> out;
    for (int k = 0; k < b; ++k)
      out.push_back({Rational(k, b), Rational(k + 1, b), Rational(b), Rational(-k)});
    return out;
  }
  throw UnsupportedError("intermittent maps have no affine branches; use iterate_float");
}

KeyValueBlock SystemSpec::to_kv() const {
  KeyValueBlock kv;
  kv.set("kind", to_string(kind));
  kv.set("measure", measure == MeasureKind::LebesgueInvariant ? "lebesgue" : "birkhoff");
  if (kind == SystemKind::DigitShift) {
    std::string b;
    for (std::size_t i = 0; i < bases.size(); ++i) b += (i ? "," : "") + std::to_string(bases[i]);
    kv.set("bases", b);
  } else if (kind == SystemKind::PiecewiseAffine) {
    std::string b;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const auto& br = branches[i];
      b += (i ? ";" : "") + repp::to_string(br.lo) + ":" + repp::to_string(br.hi) + ":" +
           repp::to_string(br.slope) + ":" + repp::to_string(br.offset);
    }
    kv.set("branches", b);
  } else {
    std::ostringstream os;
    os.precision(17);
    os << lsv_alpha;
    kv.set("alpha", os.str());
  }
  return kv;
}

SystemSpec SystemSpec::from_kv(const KeyValueBlock& kv) {
  kv.require_only({"kind", "bases", "branches", "alpha", "measure", "zeta"}, "system block");
  SystemSpec s;
  const std::string& kind = kv.get("kind");
  if (kind == "digit_shift") {
    s.kind = SystemKind::DigitShift;
    s.bases.clear();
    for (const auto& part : split(kv.get("bases"), ',')) {
      try {
        s.bases.push_back(std::stoi(part));
      } catch (const std::exception&) {
        throw ConfigError("bad base '" + part + "'");
      }
    }
    s.dimension = static_cast<int>(s.bases.size());
    s.measure = MeasureKind::LebesgueInvariant;
  } else if (kind == "piecewise_affine") {
    s.kind = SystemKind::PiecewiseAffine;
    for (const auto& part : split(kv.get("branches"), ';')) {
      const auto f = split(part, ':');
      if (f.size() != 4) throw ConfigError("branch '" + part + "' needs lo:hi:slope:offset");
      s.branches.push_back(
          {parse_rational(f[0]), parse_rational(f[1]), parse_rational(f[2]), parse_rational(f[3])});
    }
    s.measure = MeasureKind::EmpiricalBirkhoff;
  } else if (kind == "intermittent") {
    s.kind = SystemKind::Intermittent;
    s.lsv_alpha = kv.get_double("alpha");
    s.measure = MeasureKind::EmpiricalBirkhoff;
  } else {
    throw ConfigError("unknown system kind '" + kind + "'");
  }
  if (auto m = kv.find("measure")) {
    if (*m == "lebesgue")
      s.measure = MeasureKind::LebesgueInvariant;
    else if (*m == "birkhoff")
      s.measure = MeasureKind::EmpiricalBirkhoff;
    else
      throw ConfigError("unknown measure '" + *m + "'");
  }
  s.validate();
  return s;
}

namespace {

template <typename T>
IntervalSet<T> image_impl(const SystemSpec& spec, const IntervalSet<T>& s) {
  std::vector<Interval<T>> out;
  for (const auto& br : spec.affine_branches()) {
    const T lo = from_rational<T>(br.lo), hi = from_rational<T>(br.hi);
    const T slope = from_rational<T>(br.slope), off = from_rational<T>(br.offset);
    for (const auto& piece : s.intersect(IntervalSet<T>::single(lo, hi))) {
      T a = slope * piece.lo + off;
      T b = slope * piece.hi + off;
      if (b < a) std::swap(a, b);
      out.push_back({a, b});
    }
    if (out.size() > kIntervalCap)
      throw CapError("image exceeds " + std::to_string(kIntervalCap) + " intervals");
  }
  return IntervalSet<T>(std::move(out));
}

template <typename T>
IntervalSet<T> preimage_impl(const SystemSpec& spec, const IntervalSet<T>& s) {
  std::vector<Interval<T>> out;
  for (const auto& br : spec.affine_branches()) {
    const T lo = from_rational<T>(br.lo), hi = from_rational<T>(br.hi);
    const T slope = from_rational<T>(br.slope), off = from_rational<T>(br.offset);
    for (const auto& piece : s) {
      T a = (piece.lo - off) / slope;
      T b = (piece.hi - off) / slope;
      if (b < a) std::swap(a, b);
      a = std::max(a, lo);
      b = std::min(b, hi);
      if (a < b) out.push_back({a, b});
    }
    if (out.size() > kIntervalCap)
      throw CapError("preimage exceeds " + std::to_string(kIntervalCap) + " intervals");
  }
  return IntervalSet<T>(std::move(out));
}

}  // namespace

RationalIntervalUnion image(const SystemSpec& spec, const RationalIntervalUnion& s) {
  return image_impl(spec, s);
}
RationalIntervalUnion preimage(const SystemSpec& spec, const RationalIntervalUnion& s) {
  return preimage_impl(spec, s);
}
IntervalUnion image(const SystemSpec& spec, const IntervalUnion& s) { return image_impl(spec, s); }
IntervalUnion preimage(const SystemSpec& spec, const IntervalUnion& s) {
  return preimage_impl(spec, s);
}

std::optional<std::uint64_t> min_return_time(const SystemSpec& spec,
                                             const RationalIntervalUnion& s,
                                             std::uint64_t horizon) {
  if (s.empty()) throw DomainError("min_return_time needs a nonempty set");
  RationalIntervalUnion cur = s;
  for (std::uint64_t r = 1; r <= horizon; ++r) {
    try {
      cur = image(spec, cur);
    } catch (const CapError& e) {
      throw CapError(std::string(e.what()) + "; no return up to r = " + std::to_string(r - 1));
    }
    if (cur.intersects(s)) return r;
  }
  return std::nullopt;
}

namespace {

double lsv(double x, double alpha) {
  if (x < 0.5) return x * (1.0 + std::pow(2.0 * x, alpha));
  return 2.0 * x - 1.0;
}

double lsv_derivative(double x, double alpha) {
  if (x < 0.5) return 1.0 + (alpha + 1.0) * std::pow(2.0 * x, alpha);
  return 2.0;
}

const AffineBranch& branch_of(const std::vector<AffineBranch>& branches, const Rational& x) {
  for (const auto& br : branches)
    if (br.lo <= x && x < br.hi) return br;
  throw DomainError("point " + repp::to_string(x) + " lies outside [0,1)");
}

}  // namespace

Eigen::MatrixXd jacobian_at(const SystemSpec& spec, const std::vector<ExactReal>& zeta, int p) {
  if (p < 1) throw DomainError("period must be at least 1");
  if (static_cast<int>(zeta.size()) != spec.dimension)
    throw DomainError("point dimension does not match the system");
  const int d = spec.dimension;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(d, d);

  if (spec.kind == SystemKind::Intermittent) {
    double x = zeta[0].to_double();
    const double x0 = x;
    double deriv = 1.0;
    for (int i = 0; i < p; ++i) {
      deriv *= lsv_derivative(x, spec.lsv_alpha);
      x = lsv(x, spec.lsv_alpha);
    }
    if (std::abs(x - x0) > 1e-12)
      throw DomainError("zeta is not " + std::to_string(p) + "-periodic: iterate " +
                        std::to_string(p) + " differs by " + std::to_string(std::abs(x - x0)));
    jac(0, 0) = deriv;
    return jac;
  }

  for (int c = 0; c < d; ++c) {
    if (!zeta[c].is_rational())
      throw DomainError("zeta coordinate " + std::to_string(c) + " (" + zeta[c].to_string() +
                        ") is irrational and cannot be periodic for an affine map");
    Rational x = zeta[c].coef - floor_scalar(zeta[c].coef);
    const Rational x0 = x;
    double deriv = 1.0;
    if (spec.kind == SystemKind::DigitShift) {
      const int b = spec.bases[static_cast<std::size_t>(c)];
      for (int i = 0; i < p; ++i) {
        x = x * b;
        x -= floor_scalar(x);
        deriv *= b;
      }
    } else {
      for (int i = 0; i < p; ++i) {
        const AffineBranch& br = branch_of(spec.branches, x);
        deriv *= to_double(br.slope);
        x = br.slope * x + br.offset;
        if (x == 1) x = 0;
      }
    }
    if (x != x0)
      throw DomainError("zeta is not " + std::to_string(p) + "-periodic: iterate " +
                        std::to_string(p) + " of coordinate " + std::to_string(c) + " is " +
                        repp::to_string(x) + ", not " + repp::to_string(x0));
    jac(c, c) = deriv;
  }
  return jac;
}

std::vector<double> apply_float(const SystemSpec& spec, const std::vector<double>& x) {
  std::vector<double> y(x.size());
  switch (spec.kind) {
    case SystemKind::DigitShift:
      for (std::size_t c = 0; c < x.size(); ++c) {
        const double v = x[c] * spec.bases[c];
        y[c] = v - std::floor(v);
      }
      break;
    case SystemKind::PiecewiseAffine: {
      for (const auto& br : spec.branches) {
        if (to_double(br.lo) <= x[0] && x[0] < to_double(br.hi)) {
          y[0] = to_double(br.slope) * x[0] + to_double(br.offset);
          break;
        }
      }
      break;
    }
    case SystemKind::Intermittent:
      y[0] = lsv(x[0], spec.lsv_alpha);
      break;
  }
  for (double& v : y)
    if (v >= 1.0 || v < 0.0) v -= std::floor(v);
  return y;
}

std::vector<std::vector<double>> iterate_float(const SystemSpec& spec,
                                               const std::vector<double>& x0, std::uint64_t n,
                                               bool dither, std::uint64_t dither_seed) {
  if (spec.kind == SystemKind::DigitShift)
    throw UnsupportedError("digit-shift systems are iterated exactly by DigitStreamOrbit");
  if (static_cast<int>(x0.size()) != spec.dimension)
    throw DomainError("initial point dimension does not match the system");
  for (double v : x0)
    if (!(v >= 0.0 && v < 1.0)) throw DomainError("initial point must lie in [0,1)^d");
  Engine eng(dither_seed);
  std::vector<std::vector<double>> out;
  out.reserve(n);
  std::vector<double> x = x0;
  for (std::uint64_t i = 0; i < n; ++i) {
    x = apply_float(spec, x);
    if (dither) {
      for (double& v : x) {
        v += (uniform01(eng) - 0.5) * 0x1.0p-51;
        v -= std::floor(v);
        if (v >= 1.0) v = 0.0;
      }
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace repp
