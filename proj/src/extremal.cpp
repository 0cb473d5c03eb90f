#include "repp/extremal.hpp"

#include "repp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace repp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Appends (x, v) to a running-minimum path; a repeated x overwrites.
void push_step(StepPath& p, double x, double v) {
  const double current = p.values.empty() ? p.initial : p.values.back();
  if (!(v < current)) return;
  if (!p.breakpoints.empty() && p.breakpoints.back() == x) {
    p.values.back() = v;
    return;
  }
  p.breakpoints.push_back(x);
  p.values.push_back(v);
}

}  // namespace

double StepPath::at(double x) const {
  const auto it = right_continuous
                      ? std::upper_bound(breakpoints.begin(), breakpoints.end(), x)
                      : std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
  if (it == breakpoints.begin()) return initial;
  return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

void write_path_csv(std::ostream& os, const StepPath& path) {
  char buf[96];
  os << "t,value\n";
  std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.start, path.initial);
  os << buf;
  for (std::size_t i = 0; i < path.breakpoints.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.breakpoints[i], path.values[i]);
    os << buf;
  }
}

StepPath h1_project(const PointMeasure& pm) {
  if (pm.mark_dim() != 1) throw DomainError("h1 needs scalar marks");
  if (!pm.sorted()) throw StateError("point measure is not sorted");
  StepPath p;
  p.end = pm.window().horizon;
  for (std::size_t i = 0; i < pm.size(); ++i)
    if (pm.time(i) < p.end) push_step(p, pm.time(i), pm.mark(i));
  return p;
}

StepPath h2_project(const PointMeasure& pm) {
  if (pm.mark_dim() != 1) throw DomainError("h2 needs scalar marks");
  StepPath p;
  p.end = pm.window().mark_cap;
  p.initial = pm.window().horizon;
  p.right_continuous = false;
  std::vector<std::size_t> order(pm.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pm.mark(a) < pm.mark(b); });
  for (std::size_t i : order)
    if (pm.time(i) < pm.window().horizon) push_step(p, pm.mark(i), pm.time(i));
  return p;
}

StepPath extremal_path(std::span<const double> values, const ThresholdScheme& ts, double tau_max,
                       double horizon) {
  StepPath p;
  p.end = horizon;
  const double n = ts.n();
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double t = static_cast<double>(j) / n;
    if (t >= horizon) break;
    const double mark = ts.tau_of(values[j]);
    if (mark <= tau_max) push_step(p, t, mark);
  }
  return p;
}

StepPath extremal_path(const OrbitHits& hits) {
  StepPath p;
  p.end = hits.horizon;
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (hits.index[i] < hits.length)
      push_step(p, static_cast<double>(hits.index[i]) / hits.n, hits.mark[i]);
  return p;
}

PointMeasure h3_jumps(const StepPath& path) {
  PointMeasure pm(1, Window{path.end, path.initial});
  for (std::size_t i = 0; i < path.breakpoints.size(); ++i)
    pm.add(path.breakpoints[i], path.values[i]);
  return pm;
}

PointMeasure h_record_projection(const PointMeasure& pm) {
  if (pm.mark_dim() != 1) throw DomainError("record projection needs scalar marks");
  if (!pm.sorted()) throw StateError("point measure is not sorted");
  PointMeasure out(1, pm.window());
  double running = kInf;
  std::size_t i = 0;
  while (i < pm.size()) {
    std::size_t end = i;
    std::size_t arg = i;
    std::size_t ties = 0;
    while (end < pm.size() && pm.time(end) == pm.time(i)) {
      if (pm.mark(end) < pm.mark(arg)) {
        arg = end;
        ties = 0;
      } else if (end != arg && pm.mark(end) == pm.mark(arg)) {
        ++ties;
      }
      ++end;
    }
    const double low = pm.mark(arg);
    if (ties == 0 && low < running) out.add(pm.time(arg), low);
    running = std::min(running, low);
    i = end;
  }
  return out;
}

RecordSeries record_times(std::span<const double> values) {
  RecordSeries rs;
  double best = -kInf;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j])) throw DataError("record series must be finite");
    if (j == 0 || values[j] > best) {
      rs.times.push_back(j);
      rs.raw.push_back(values[j]);
      best = values[j];
    }
  }
  return rs;
}

RecordSeries record_times(std::span<const double> values, const ThresholdScheme& ts) {
  RecordSeries rs = record_times(values);
  for (double v : rs.raw) rs.normalized.push_back(ts.tau_of(v));
  return rs;
}

RecordSeries record_times(const OrbitHits& hits) {
  RecordSeries rs;
  double running = kInf;
  bool first = true;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits.index[i] >= hits.length) continue;
    if (first) {
      rs.exact_from = hits.index[i];
      first = false;
    }
    if (hits.mark[i] < running) {
      rs.times.push_back(hits.index[i]);
      rs.normalized.push_back(hits.mark[i]);
      running = hits.mark[i];
    }
  }
  if (first) rs.exact_from = hits.length;
  return rs;
}

RecordProcesses record_pp(const RecordSeries& rs, double n) {
  if (!(n > 0.0)) throw DomainError("n must be positive");
  double vmax = 0.0;
  for (double v : rs.normalized) vmax = std::max(vmax, v);
  RecordProcesses out{PointMeasure(0, Window{kInf, 0.0}), PointMeasure(0, Window{vmax, 0.0})};
  for (std::uint64_t t : rs.times) out.times.add(static_cast<double>(t) / n);
  for (double v : rs.normalized) out.values.add(v);
  out.values.sort();
  return out;
}

double record_law_pmf(double a, double b, unsigned k) {
  if (!(a > 0.0) || !(a < b)) throw DomainError("record law needs 0 < a < b");
  const double l = std::log(b / a);
  return std::exp(std::log(a / b) + k * std::log(l) - std::lgamma(k + 1.0));
}

std::uint64_t count_open(const PointMeasure& pm, double a, double b) {
  std::uint64_t c = 0;
  for (double t : pm.times()) c += (t > a && t < b) ? 1 : 0;
  return c;
}

}  // namespace repp
