#include "repp/box_union.hpp"

#include "repp/errors.hpp"

#include <algorithm>
#include <functional>

namespace repp {

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
  return v;
}

bool Box::empty() const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) return true;
  return lo.empty();
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= x[i] && x[i] < hi[i])) return false;
  return true;
}

Box Box::intersect(const Box& other) const {
  Box out = *this;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    out.lo[i] = std::max(lo[i], other.lo[i]);
    out.hi[i] = std::min(hi[i], other.hi[i]);
  }
  return out;
}

Box Box::scaled(std::span<const double> scale) const {
  Box out = *this;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const double a = lo[i] * scale[i], b = hi[i] * scale[i];
    out.lo[i] = std::min(a, b);
    out.hi[i] = std::max(a, b);
  }
  return out;
}

BoxUnion::BoxUnion(std::vector<Box> boxes) {
  for (auto& b : boxes) {
    if (b.lo.size() != b.hi.size()) throw DomainError("box corners differ in dimension");
    if (!boxes_.empty() && b.dimension() != boxes_.front().dimension())
      throw DomainError("boxes of different dimensions in one union");
    if (!b.empty()) boxes_.push_back(std::move(b));
  }
}

bool BoxUnion::contains(std::span<const double> x) const {
  for (const auto& b : boxes_)
    if (b.contains(x)) return true;
  return false;
}

double BoxUnion::measure() const { return difference_measure(*this, BoxUnion()); }

Box BoxUnion::bounding_box() const {
  if (boxes_.empty()) throw DomainError("bounding box of an empty union");
  Box out = boxes_.front();
  for (const auto& b : boxes_)
    for (std::size_t i = 0; i < b.lo.size(); ++i) {
      out.lo[i] = std::min(out.lo[i], b.lo[i]);
      out.hi[i] = std::max(out.hi[i], b.hi[i]);
    }
  return out;
}

BoxUnion BoxUnion::unite(const BoxUnion& other) const {
  std::vector<Box> all = boxes_;
  all.insert(all.end(), other.boxes_.begin(), other.boxes_.end());
  return BoxUnion(std::move(all));
}

BoxUnion BoxUnion::intersect(const BoxUnion& other) const {
  std::vector<Box> out;
  for (const auto& a : boxes_)
    for (const auto& b : other.boxes_) {
      Box c = a.intersect(b);
      if (!c.empty()) out.push_back(std::move(c));
    }
  return BoxUnion(std::move(out));
}

double difference_measure(const BoxUnion& a, const BoxUnion& removed) {
  if (a.empty()) return 0.0;
  const int d = a.dimension();
  std::vector<std::vector<double>> cuts(static_cast<std::size_t>(d));
  for (const auto* u : {&a, &removed})
    for (const auto& b : u->boxes())
      for (int i = 0; i < d; ++i) {
        cuts[static_cast<std::size_t>(i)].push_back(b.lo[static_cast<std::size_t>(i)]);
        cuts[static_cast<std::size_t>(i)].push_back(b.hi[static_cast<std::size_t>(i)]);
      }
  for (auto& c : cuts) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  // Visit every grid cell and test its midpoint.
  double total = 0.0;
  std::vector<double> mid(static_cast<std::size_t>(d));
  std::function<void(int, double)> walk = [&](int axis, double vol) {
    if (axis == d) {
      if (a.contains(mid) && !removed.contains(mid)) total += vol;
      return;
    }
    const auto& c = cuts[static_cast<std::size_t>(axis)];
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
      mid[static_cast<std::size_t>(axis)] = 0.5 * (c[k] + c[k + 1]);
      walk(axis + 1, vol * (c[k + 1] - c[k]));
    }
  };
  walk(0, 1.0);
  return total;
}

}  // namespace repp
