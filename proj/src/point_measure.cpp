#include "repp/point_measure.hpp"

#include "repp/errors.hpp"
#include "repp/kv.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>

namespace repp {

PointMeasure::PointMeasure(int mark_dim, Window window) : mark_dim_(mark_dim), window_(window) {
  if (mark_dim < 0) throw DomainError("mark dimension must be nonnegative");
}

void PointMeasure::add(double t, std::span<const double> marks) {
  if (static_cast<int>(marks.size()) != mark_dim_)
    throw DomainError("atom mark dimension does not match the measure");
  times_.push_back(t);
  marks_.insert(marks_.end(), marks.begin(), marks.end());
}

bool PointMeasure::sorted() const { return std::is_sorted(times_.begin(), times_.end()); }

void PointMeasure::sort() {
  if (sorted()) return;
  std::vector<std::size_t> order(times_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return times_[x] < times_[y]; });
  std::vector<double> t2, m2;
  t2.reserve(times_.size());
  m2.reserve(marks_.size());
  const auto md = static_cast<std::size_t>(mark_dim_);
  for (auto i : order) {
    t2.push_back(times_[i]);
    m2.insert(m2.end(), marks_.begin() + static_cast<std::ptrdiff_t>(i * md),
              marks_.begin() + static_cast<std::ptrdiff_t>((i + 1) * md));
  }
  times_ = std::move(t2);
  marks_ = std::move(m2);
}

void write_csv_header(std::ostream& os, int mark_dim) {
  os << "run_id,t";
  for (int k = 1; k <= mark_dim; ++k) os << ",mark" << k;
  os << '\n';
}

void write_csv_rows(std::ostream& os, std::uint64_t run_id, const PointMeasure& pm) {
  char buf[64];
  for (std::size_t i = 0; i < pm.size(); ++i) {
    os << run_id;
    std::snprintf(buf, sizeof buf, ",%.17g", pm.time(i));
    os << buf;
    for (int k = 0; k < pm.mark_dim(); ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g", pm.mark(i, k));
      os << buf;
    }
    os << '\n';
  }
}

std::vector<PointMeasure> read_csv(std::istream& is, Window window) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("empty point CSV");
  const auto header = split(line, ',');
  if (header.size() < 2 || header[0] != "run_id" || header[1] != "t")
    throw DataError("point CSV must start with run_id,t");
  const int mark_dim = static_cast<int>(header.size()) - 2;
  std::vector<PointMeasure> runs;
  std::vector<double> marks(static_cast<std::size_t>(mark_dim));
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (static_cast<int>(f.size()) != mark_dim + 2)
      throw DataError("line " + std::to_string(line_no) + ": wrong field count");
    try {
      const auto id = static_cast<std::size_t>(std::stoull(f[0]));
      while (runs.size() <= id) runs.emplace_back(mark_dim, window);
      for (int k = 0; k < mark_dim; ++k) marks[static_cast<std::size_t>(k)] = std::stod(f[static_cast<std::size_t>(k) + 2]);
      runs[id].add(std::stod(f[1]), marks);
    } catch (const std::logic_error&) {
      throw DataError("line " + std::to_string(line_no) + ": malformed number");
    }
  }
  for (auto& r : runs) r.sort();
  return runs;
}

bool Cell::contains_mark(std::span<const double> m) const {
  if (m.size() == 1) {
    for (const auto& p : marks)
      if (p.lo < m[0] && m[0] <= p.hi) return true;
    return false;
  }
  return boxes.contains(m);
}

void RectangleFamily::validate() const {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!(cells[k].a >= 0.0 && cells[k].a < cells[k].b))
      throw DomainError("cell time interval must satisfy 0 <= a < b");
    if (k > 0 && cells[k].a < cells[k - 1].b)
      throw DomainError("cell time intervals must be ordered and disjoint");
  }
}

double RectangleFamily::total_mark_length() const {
  double s = 0.0;
  for (const auto& c : cells) s += c.marks.measure();
  return s;
}

std::vector<std::uint64_t> count_in(const PointMeasure& pm, const RectangleFamily& fam) {
  std::vector<std::uint64_t> counts(fam.cells.size(), 0);
  const auto& times = pm.times();
  for (std::size_t k = 0; k < fam.cells.size(); ++k) {
    const Cell& cell = fam.cells[k];
    auto it = std::lower_bound(times.begin(), times.end(), cell.a);
    for (auto i = static_cast<std::size_t>(it - times.begin()); i < pm.size() && pm.time(i) < cell.b; ++i)
      if (cell.contains_mark(pm.marks(i))) ++counts[k];
  }
  return counts;
}

namespace {

Cell band_cell(double a, double b, std::initializer_list<std::pair<double, double>> bands) {
  Cell c;
  c.a = a;
  c.b = b;
  c.marks = IntervalUnion(bands);
  return c;
}

RectangleFamily fam(std::initializer_list<Cell> cells) {
  RectangleFamily f;
  f.cells = cells;
  f.validate();
  return f;
}

Cell box_cell(double a, double b, std::vector<Box> boxes) {
  Cell c;
  c.a = a;
  c.b = b;
  c.boxes = BoxUnion(std::move(boxes));
  return c;
}

Box box(double x0, double x1, double y0, double y1) { return Box{{x0, y0}, {x1, y1}}; }

}  // namespace

std::vector<RectangleFamily> standard_grid() {
  return {
      fam({band_cell(0.0, 1.0, {{0.0, 1.0}})}),
      fam({band_cell(0.0, 1.0, {{0.0, 2.0}})}),
      fam({band_cell(0.0, 1.0, {{0.0, 5.0}})}),
      fam({band_cell(0.0, 0.5, {{0.0, 4.0}})}),
      fam({band_cell(0.0, 1.0, {{1.0, 2.0}})}),
      fam({band_cell(0.0, 1.0, {{2.0, 6.0}})}),
      fam({band_cell(0.0, 1.0, {{0.5, 1.0}, {1.5, 3.0}})}),
      fam({band_cell(0.0, 1.0, {{3.0, 10.0}})}),
      fam({band_cell(0.2, 0.7, {{0.0, 3.0}})}),
      fam({band_cell(0.0, 1.0, {{0.0, 0.5}, {4.0, 6.0}})}),
      fam({band_cell(0.0, 0.5, {{0.0, 2.0}}), band_cell(0.5, 1.0, {{1.0, 3.0}})}),
      fam({band_cell(0.0, 0.3, {{0.0, 1.0}}), band_cell(0.4, 1.0, {{0.0, 4.0}})}),
      fam({band_cell(0.0, 1.0, {{0.25, 1.0}, {2.0, 8.0}})}),
      fam({band_cell(0.1, 0.9, {{1.0, 1.5}, {2.0, 2.5}, {4.0, 5.0}})}),
      fam({band_cell(0.0, 0.2, {{0.0, 3.0}}), band_cell(0.3, 0.6, {{2.0, 5.0}}),
           band_cell(0.7, 1.0, {{0.0, 1.0}})}),
      fam({band_cell(0.0, 1.0, {{6.0, 10.0}})}),
      fam({band_cell(0.0, 0.25, {{0.0, 8.0}})}),
      fam({band_cell(0.0, 1.0, {{0.1, 0.3}, {0.6, 0.9}})}),
      fam({band_cell(0.0, 0.5, {{0.0, 1.0}, {2.0, 3.0}}), band_cell(0.5, 1.0, {{0.5, 2.0}})}),
      fam({band_cell(0.5, 1.0, {{0.0, 2.5}})}),
  };
}

std::vector<RectangleFamily> standard_grid_multi(double radius) {
  // Boxes stay inside the square of half-width radius / sqrt(2), which
  // lies inside the window ball.
  const double s = radius / 1.4142135623730951;
  const double h = s / 2.0;
  const double q = s / 4.0;
  return {
      fam({box_cell(0.0, 1.0, {box(-s, s, -s, s)})}),
      fam({box_cell(0.0, 1.0, {box(-h, h, -h, h)})}),
      fam({box_cell(0.0, 1.0, {box(0.0, s, -s, s)})}),
      fam({box_cell(0.0, 0.5, {box(-s, s, 0.0, s)})}),
      fam({box_cell(0.0, 1.0, {box(h, s, -s, s)})}),
      fam({box_cell(0.0, 1.0, {box(-q, q, -q, q)})}),
      fam({box_cell(0.0, 1.0, {box(-s, -h, -s, s), box(h, s, -s, s)})}),
      fam({box_cell(0.0, 1.0, {box(-s, s, h, s)})}),
      fam({box_cell(0.2, 0.7, {box(-h, s, -h, s)})}),
      fam({box_cell(0.0, 1.0, {box(-q, q, -s, s)})}),
      fam({box_cell(0.0, 0.5, {box(-h, h, -h, h)}), box_cell(0.5, 1.0, {box(0.0, s, 0.0, s)})}),
      fam({box_cell(0.0, 0.3, {box(-s, s, -q, q)}), box_cell(0.4, 1.0, {box(-h, h, -s, s)})}),
      fam({box_cell(0.0, 1.0, {box(q, h, q, h), box(-h, -q, -h, -q)})}),
      fam({box_cell(0.1, 0.9, {box(-s, 0.0, -s, 0.0)})}),
      fam({box_cell(0.0, 0.2, {box(-s, s, -s, s)}), box_cell(0.3, 0.6, {box(-h, h, -h, h)}),
           box_cell(0.7, 1.0, {box(0.0, h, 0.0, h)})}),
      fam({box_cell(0.0, 1.0, {box(-s, -q, -s, -q), box(q, s, q, s)})}),
      fam({box_cell(0.0, 0.25, {box(-s, s, -s, s)})}),
      fam({box_cell(0.0, 1.0, {box(-q, 0.0, -s, s), box(h, s, -q, q)})}),
      fam({box_cell(0.0, 0.5, {box(0.0, h, -h, 0.0)}), box_cell(0.5, 1.0, {box(-s, -h, -s, s)})}),
      fam({box_cell(0.5, 1.0, {box(-s, s, -h, h)})}),
  };
}

}  // namespace repp
