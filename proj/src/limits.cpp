#include "repp/limits.hpp"

#include "repp/errors.hpp"
#include "repp/rng.hpp"

#include <cmath>
#include <numbers>

namespace repp {

namespace {

constexpr int kMaxStack = 400;

double min_singular_value(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().minCoeff();
}

std::vector<std::vector<double>> matrix_rows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.emplace_back();
    for (Eigen::Index c = 0; c < m.cols(); ++c) rows.back().push_back(m(r, c));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != n)
      throw ConfigError("matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c)
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return m;
}

// Calls emit(t, u) for the base points of a band process of the given rate
// per unit band area, marks in (0, cap] by unit bands.
template <typename Emit>
void band_process(Engine& eng, double rate, double horizon, double cap, Emit&& emit) {
  if (!(rate > 0.0) || !(horizon > 0.0) || !(cap > 0.0)) return;
  const int bands = static_cast<int>(std::ceil(cap));
  for (int i = 1; i <= bands; ++i) {
    double t = exponential(eng, rate);
    while (t < horizon) {
      const double u = static_cast<double>(i) - uniform01(eng);
      if (u <= cap) emit(t, u);
      t += exponential(eng, rate);
    }
  }
}

Eigen::VectorXd random_direction(Engine& eng, int d) {
  Eigen::VectorXd v(d);
  if (d == 1) {
    v(0) = bernoulli(eng, 0.5) ? 1.0 : -1.0;
    return v;
  }
  if (d == 2) {
    const double phi = uniform(eng, 0.0, 2.0 * std::numbers::pi);
    v << std::cos(phi), std::sin(phi);
    return v;
  }
  double norm = 0.0;
  do {
    for (int i = 0; i < d; i += 2) {
      // Box-Muller pair.
      const double r = std::sqrt(-2.0 * std::log(uniform01_open_low(eng)));
      const double a = uniform(eng, 0.0, 2.0 * std::numbers::pi);
      v(i) = r * std::cos(a);
      if (i + 1 < d) v(i + 1) = r * std::sin(a);
    }
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

}  // namespace

std::string to_string(LawKind k) {
  switch (k) {
    case LawKind::Poisson2D: return "poisson2d";
    case LawKind::CompoundPoisson1D: return "compound_poisson1d";
    case LawKind::StackedGeometric: return "stacked_geometric";
    case LawKind::PoissonMultiD: return "poisson_multid";
    case LawKind::StackedLinear: return "stacked_linear";
    case LawKind::NDag: return "ndag";
    case LawKind::HatN: return "hat_n";
    case LawKind::DoubleHatN: return "double_hat_n";
  }
  return "unknown";
}

LimitLaw LimitLaw::poisson2d() { return {}; }

LimitLaw LimitLaw::compound1d(double theta, double tau) {
  LimitLaw l;
  l.kind = LawKind::CompoundPoisson1D;
  l.theta = theta;
  l.tau = tau;
  l.validate();
  return l;
}

LimitLaw LimitLaw::stacked_geometric(double alpha, int d) {
  LimitLaw l;
  l.kind = LawKind::StackedGeometric;
  l.alpha = alpha;
  l.d = d;
  l.theta = 1.0 - std::pow(alpha, -d);
  l.validate();
  return l;
}

LimitLaw LimitLaw::poisson_multi(int d) {
  LimitLaw l;
  l.kind = LawKind::PoissonMultiD;
  l.d = d;
  l.validate();
  return l;
}

LimitLaw LimitLaw::stacked_linear(Eigen::MatrixXd dt, int period) {
  LimitLaw l;
  l.kind = LawKind::StackedLinear;
  l.d = static_cast<int>(dt.rows());
  l.theta = 1.0 - 1.0 / std::abs(dt.determinant());
  l.matrix = std::move(dt);
  l.period = period;
  l.validate();
  return l;
}

LimitLaw LimitLaw::ndag(Eigen::MatrixXd dt, int period) {
  LimitLaw l = stacked_linear(std::move(dt), period);
  l.kind = LawKind::NDag;
  l.validate();
  return l;
}

LimitLaw LimitLaw::hat_n(double beta_plus) {
  LimitLaw l;
  l.kind = LawKind::HatN;
  l.beta_plus = beta_plus;
  l.theta = 1.0 - 0.5 / beta_plus;
  l.p_z1 = 1.0 / (2.0 * l.theta);
  l.validate();
  return l;
}

LimitLaw LimitLaw::double_hat_n() {
  LimitLaw l;
  l.kind = LawKind::DoubleHatN;
  l.big_theta = 23.0 / 33.0;
  l.p_z1 = 3.0 / 23.0;
  l.ratio = 0.3;
  l.theta = 10.0 / 11.0;
  l.validate();
  return l;
}

void LimitLaw::validate() const {
  auto check_theta = [&] {
    if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0, 1]");
  };
  switch (kind) {
    case LawKind::Poisson2D: break;
    case LawKind::CompoundPoisson1D:
      check_theta();
      if (!(tau > 0.0)) throw DomainError("tau must be positive");
      break;
    case LawKind::StackedGeometric:
      if (!(alpha > 1.0)) throw DomainError("alpha must exceed 1");
      if (d < 1) throw DomainError("d must be at least 1");
      check_theta();
      if (std::abs(theta - (1.0 - std::pow(alpha, -d))) > 1e-12)
        throw DomainError("stacked geometric law needs theta = 1 - alpha^-d");
      break;
    case LawKind::PoissonMultiD:
      if (d < 1) throw DomainError("d must be at least 1");
      break;
    case LawKind::StackedLinear:
    case LawKind::NDag: {
      if (matrix.rows() != d || matrix.cols() != d || d < 1)
        throw DomainError("derivative matrix must be d x d");
      const double det = std::abs(matrix.determinant());
      if (!(det > 1.0)) throw DomainError("derivative matrix must have |det| > 1");
      check_theta();
      if (std::abs(theta - (1.0 - 1.0 / det)) > 1e-12)
        throw DomainError("theta must equal 1 - 1/|det DT|");
      if (kind == LawKind::NDag && d != 2) throw DomainError("N-dagger is two-dimensional");
      break;
    }
    case LawKind::HatN:
      if (!(beta_plus > 1.0)) throw DomainError("beta+ must exceed 1");
      if (std::abs(theta - (1.0 - 0.5 / beta_plus)) > 1e-12 ||
          std::abs(p_z1 - 1.0 / (2.0 * theta)) > 1e-12)
        throw DomainError("hat-N needs theta = 1 - 1/(2 beta+) and P(Z=1) = 1/(2 theta)");
      break;
    case LawKind::DoubleHatN:
      if (!(big_theta > 0.0 && big_theta < 1.0) || !(p_z1 > 0.0 && p_z1 < 1.0))
        throw DomainError("Theta and P(Z=1) must lie in (0,1)");
      if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("companion ratio must lie in (0,1)");
      break;
  }
}

int LimitLaw::mark_dim() const {
  return (kind == LawKind::PoissonMultiD || kind == LawKind::StackedLinear) ? d : 1;
}

OuterMeasureSpec LimitLaw::outer_measure() const {
  switch (kind) {
    case LawKind::Poisson2D:
    case LawKind::PoissonMultiD: return OuterMeasureSpec::lebesgue();
    case LawKind::StackedGeometric: return OuterMeasureSpec::contraction(std::pow(alpha, -d));
    case LawKind::StackedLinear: return OuterMeasureSpec::linear(matrix.inverse());
    case LawKind::NDag: return OuterMeasureSpec::linear(matrix.inverse(), true);
    case LawKind::HatN: return OuterMeasureSpec::mixture({0.5, 0.0}, {0.5, 1.0 / beta_plus});
    case LawKind::DoubleHatN: {
      // nu(A) = Theta|A| + Theta P(Z=1) |A/ratio \ A|, rewritten with
      // |A/ratio \ A| = (1/ratio - 1)|A| + |A \ A/ratio|.
      const double c = big_theta * p_z1;
      return OuterMeasureSpec::mixture({big_theta + c * (1.0 / ratio - 1.0), 0.0}, {c, 1.0 / ratio});
    }
    case LawKind::CompoundPoisson1D: break;
  }
  throw UnsupportedError("the compound Poisson law has no outer measure on marks");
}

nlohmann::json LimitLaw::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  switch (kind) {
    case LawKind::Poisson2D: break;
    case LawKind::CompoundPoisson1D: j["theta"] = theta; j["tau"] = tau; break;
    case LawKind::StackedGeometric: j["alpha"] = alpha; j["d"] = d; j["theta"] = theta; break;
    case LawKind::PoissonMultiD: j["d"] = d; break;
    case LawKind::StackedLinear:
    case LawKind::NDag:
      j["matrix"] = matrix_rows(matrix);
      j["period"] = period;
      j["theta"] = theta;
      break;
    case LawKind::HatN: j["beta_plus"] = beta_plus; j["theta"] = theta; j["p_z1"] = p_z1; break;
    case LawKind::DoubleHatN:
      j["big_theta"] = big_theta;
      j["p_z1"] = p_z1;
      j["ratio"] = ratio;
      break;
  }
  return j;
}

LimitLaw LimitLaw::from_json(const nlohmann::json& j) {
  const std::string k = j.at("kind").get<std::string>();
  if (k == "poisson2d") return poisson2d();
  if (k == "compound_poisson1d") return compound1d(j.at("theta"), j.at("tau"));
  if (k == "stacked_geometric") return stacked_geometric(j.at("alpha"), j.value("d", 1));
  if (k == "poisson_multid") return poisson_multi(j.at("d"));
  if (k == "stacked_linear") return stacked_linear(matrix_from_rows(j.at("matrix")), j.value("period", 1));
  if (k == "ndag") return ndag(matrix_from_rows(j.at("matrix")), j.value("period", 1));
  if (k == "hat_n") return hat_n(j.at("beta_plus"));
  if (k == "double_hat_n") return double_hat_n();
  throw ConfigError("unknown limit law '" + k + "'");
}

PointMeasure sample_poisson2d(const Window& w, std::uint64_t seed) {
  Engine eng(seed);
  PointMeasure pm(1, w);
  band_process(eng, 1.0, w.horizon, w.mark_cap, [&](double t, double u) { pm.add(t, u); });
  pm.sort();
  return pm;
}

PointMeasure sample_stacked_geometric(const LimitLaw& law, const Window& w, std::uint64_t seed) {
  if (law.kind != LawKind::StackedGeometric) throw DomainError("law is not stacked geometric");
  law.validate();
  Engine eng(seed);
  PointMeasure pm(1, w);
  const double ratio = std::pow(law.alpha, law.d);
  band_process(eng, law.theta, w.horizon, w.mark_cap, [&](double t, double u) {
    for (double m = u; m <= w.mark_cap; m *= ratio) pm.add(t, m);
  });
  pm.sort();
  return pm;
}

PointMeasure sample_compound1d(double theta, double tau, const Window& w, std::uint64_t seed) {
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0, 1]");
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  Engine eng(seed);
  PointMeasure pm(1, w);
  for (double t = exponential(eng, theta * tau); t < w.horizon; t += exponential(eng, theta * tau))
    pm.add(t, static_cast<double>(geometric(eng, theta)));
  return pm;
}

PointMeasure sample_multid(const LimitLaw& law, const Window& w, std::uint64_t seed) {
  if (law.kind != LawKind::PoissonMultiD && law.kind != LawKind::StackedLinear)
    throw DomainError("law is not a multi-dimensional Poisson or stacked linear law");
  law.validate();
  Engine eng(seed);
  const int d = law.d;
  const double radius = w.mark_cap;
  const double vd = unit_ball_volume(d);
  const double total = vd * std::pow(radius, d);
  const bool stacked = law.kind == LawKind::StackedLinear;
  const double rate = stacked ? law.theta : 1.0;
  const bool monotone = stacked && min_singular_value(law.matrix) > 1.0;
  PointMeasure pm(d, w);
  std::vector<double> mark(static_cast<std::size_t>(d));
  band_process(eng, rate, w.horizon, total, [&](double t, double v) {
    const double r = std::pow(v / vd, 1.0 / d);
    Eigen::VectorXd x = r * random_direction(eng, d);
    for (int l = 0; l < (stacked ? kMaxStack : 1); ++l) {
      if (x.norm() < radius) {
        for (int i = 0; i < d; ++i) mark[static_cast<std::size_t>(i)] = x(i);
        pm.add(t, mark);
      } else if (monotone || !stacked) {
        break;
      }
      if (stacked) x = law.matrix * x;
    }
  });
  pm.sort();
  return pm;
}

PointMeasure sample_ndag(const LimitLaw& law, const Window& w, std::uint64_t seed) {
  if (law.kind != LawKind::NDag) throw DomainError("law is not N-dagger");
  law.validate();
  Engine eng(seed);
  PointMeasure pm(1, w);
  const bool monotone = min_singular_value(law.matrix) > 1.0;
  band_process(eng, law.theta, w.horizon, w.mark_cap, [&](double t, double u) {
    const double phi = uniform(eng, 0.0, 2.0 * std::numbers::pi);
    Eigen::Vector2d v(std::cos(phi), std::sin(phi));
    pm.add(t, u);
    for (int l = 1; l < kMaxStack; ++l) {
      v = law.matrix * v;
      const double m = u * v.squaredNorm();
      if (m <= w.mark_cap)
        pm.add(t, m);
      else if (monotone)
        break;
    }
  });
  pm.sort();
  return pm;
}

PointMeasure sample_hat_n(double beta_plus, const Window& w, std::uint64_t seed) {
  const LimitLaw law = LimitLaw::hat_n(beta_plus);
  Engine eng(seed);
  PointMeasure pm(1, w);
  band_process(eng, law.theta, w.horizon, w.mark_cap, [&](double t, double u) {
    pm.add(t, u);
    if (bernoulli(eng, law.p_z1) && beta_plus * u <= w.mark_cap) pm.add(t, beta_plus * u);
  });
  pm.sort();
  return pm;
}

PointMeasure sample_double_hat_n(const Window& w, std::uint64_t seed) {
  const LimitLaw law = LimitLaw::double_hat_n();
  Engine eng(seed);
  PointMeasure pm(1, w);
  // Companions sit at ratio * u, so base marks up to cap / ratio matter.
  band_process(eng, law.big_theta, w.horizon, w.mark_cap / law.ratio, [&](double t, double u) {
    if (u <= w.mark_cap) pm.add(t, u);
    if (bernoulli(eng, law.p_z1) && law.ratio * u <= w.mark_cap) pm.add(t, law.ratio * u);
  });
  pm.sort();
  return pm;
}

PointMeasure sample(const LimitLaw& law, const Window& w, std::uint64_t seed) {
  switch (law.kind) {
    case LawKind::Poisson2D: return sample_poisson2d(w, seed);
    case LawKind::CompoundPoisson1D: return sample_compound1d(law.theta, law.tau, w, seed);
    case LawKind::StackedGeometric: return sample_stacked_geometric(law, w, seed);
    case LawKind::PoissonMultiD:
    case LawKind::StackedLinear: return sample_multid(law, w, seed);
    case LawKind::NDag: return sample_ndag(law, w, seed);
    case LawKind::HatN: return sample_hat_n(law.beta_plus, w, seed);
    case LawKind::DoubleHatN: return sample_double_hat_n(w, seed);
  }
  throw UnsupportedError("unknown law");
}

double analytic_void(const OuterMeasureSpec& nu, const RectangleFamily& fam) {
  double exponent = 0.0;
  for (const auto& cell : fam.cells) {
    const double v = cell.boxes.empty() ? nu_eval(nu, cell.marks) : nu_eval(nu, cell.boxes);
    exponent += v * cell.time_length();
  }
  return std::exp(-exponent);
}

double analytic_void(const LimitLaw& law, const RectangleFamily& fam) {
  if (law.kind == LawKind::CompoundPoisson1D) {
    double total = 0.0;
    for (const auto& cell : fam.cells) total += cell.time_length();
    return std::exp(-law.theta * law.tau * total);
  }
  return analytic_void(law.outer_measure(), fam);
}

double expected_count(const LimitLaw& law, const Cell& cell) {
  if (law.kind == LawKind::CompoundPoisson1D) return law.tau * cell.time_length();
  const double space = cell.boxes.empty() ? cell.marks.measure() : cell.boxes.measure();
  return cell.time_length() * space;
}

std::vector<std::uint64_t> compound_counts(const PointMeasure& pm, const RectangleFamily& fam) {
  std::vector<std::uint64_t> counts(fam.cells.size(), 0);
  for (std::size_t k = 0; k < fam.cells.size(); ++k)
    for (std::size_t i = 0; i < pm.size(); ++i)
      if (fam.cells[k].a <= pm.time(i) && pm.time(i) < fam.cells[k].b)
        counts[k] += static_cast<std::uint64_t>(pm.mark(i));
  return counts;
}

}  // namespace repp
