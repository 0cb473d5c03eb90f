// Finite disjoint unions of half-open intervals [a, b).
#pragma once

#include "repp/errors.hpp"
#include "repp/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

namespace repp {

template <typename T>
struct Interval {
  T lo;
  T hi;
  T length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Sorted, disjoint, non-adjacent, non-empty half-open intervals.
///
/// The same type carries sets on the real line and on the circle R/Z; for
/// the latter, call wrapped() to reduce into [0,1).
template <typename T>
class IntervalSet {
 public:
  using value_type = Interval<T>;

  IntervalSet() = default;
  IntervalSet(std::initializer_list<std::pair<T, T>> pieces) {
    for (const auto& [a, b] : pieces) parts_.push_back({a, b});
    normalize();
  }
  explicit IntervalSet(std::vector<Interval<T>> pieces)
      : parts_(std::move(pieces)) {
    normalize();
  }

  static IntervalSet single(T lo, T hi) { return IntervalSet({{lo, hi}}); }

  const std::vector<Interval<T>>& intervals() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  auto begin() const { return parts_.begin(); }
  auto end() const { return parts_.end(); }

  T measure() const {
    T total = T(0);
    for (const auto& p : parts_) total += p.hi - p.lo;
    return total;
  }
  T inf() const { return parts_.front().lo; }
  T sup() const { return parts_.back().hi; }

  bool contains(const T& x) const {
    auto it = std::upper_bound(
        parts_.begin(), parts_.end(), x,
        [](const T& v, const Interval<T>& iv) { return v < iv.lo; });
    if (it == parts_.begin()) return false;
    --it;
    return x < it->hi;
  }

  IntervalSet unite(const IntervalSet& other) const {
    std::vector<Interval<T>> all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return IntervalSet(std::move(all));
  }

  IntervalSet intersect(const IntervalSet& other) const {
    std::vector<Interval<T>> out;
    std::size_t i = 0, j = 0;
    while (i < parts_.size() && j < other.parts_.size()) {
      const T lo = std::max(parts_[i].lo, other.parts_[j].lo);
      const T hi = std::min(parts_[i].hi, other.parts_[j].hi);
      if (lo < hi) out.push_back({lo, hi});
      if (parts_[i].hi < other.parts_[j].hi)
        ++i;
      else
        ++j;
    }
    IntervalSet r;
    r.parts_ = std::move(out);
    return r;
  }

  IntervalSet subtract(const IntervalSet& other) const {
    std::vector<Interval<T>> out;
    std::size_t j = 0;
    for (const auto& p : parts_) {
      T cur = p.lo;
      while (j < other.parts_.size() && other.parts_[j].hi <= cur) ++j;
      std::size_t k = j;
      while (k < other.parts_.size() && other.parts_[k].lo < p.hi) {
        if (other.parts_[k].lo > cur) out.push_back({cur, other.parts_[k].lo});
        cur = std::max(cur, other.parts_[k].hi);
        if (!(cur < p.hi)) break;
        ++k;
      }
      if (cur < p.hi) out.push_back({cur, p.hi});
    }
    IntervalSet r;
    r.parts_ = std::move(out);
    return r;
  }

  /// Complement inside [lo, hi).
  IntervalSet complement(const T& lo, const T& hi) const {
    return single(lo, hi).subtract(*this);
  }

  bool intersects(const IntervalSet& other) const {
    return !intersect(other).empty();
  }
  bool subset_of(const IntervalSet& other) const {
    return subtract(other).empty();
  }

  /// {c x : x in S} for c > 0.
  IntervalSet scaled(const T& c) const {
    if (!(c > T(0))) throw DomainError("interval scaling factor must be positive");
    std::vector<Interval<T>> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.push_back({p.lo * c, p.hi * c});
    return IntervalSet(std::move(out));
  }

  IntervalSet translated(const T& d) const {
    std::vector<Interval<T>> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.push_back({p.lo + d, p.hi + d});
    return IntervalSet(std::move(out));
  }

  /// Reduction modulo 1 into [0,1). Intervals longer than 1 give the circle.
  IntervalSet wrapped() const {
    std::vector<Interval<T>> out;
    for (const auto& p : parts_) {
      if (!(p.hi - p.lo < T(1))) return single(T(0), T(1));
      const T shift = floor_scalar(p.lo);
      const T a = p.lo - shift;
      const T b = p.hi - shift;
      if (b <= T(1)) {
        out.push_back({a, b});
      } else {
        out.push_back({a, T(1)});
        out.push_back({T(0), b - T(1)});
      }
    }
    return IntervalSet(std::move(out));
  }

  bool operator==(const IntervalSet&) const = default;

 private:
  void normalize() {
    std::erase_if(parts_, [](const Interval<T>& p) { return !(p.lo < p.hi); });
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval<T>& a, const Interval<T>& b) { return a.lo < b.lo; });
    std::vector<Interval<T>> merged;
    merged.reserve(parts_.size());
    for (const auto& p : parts_) {
      if (!merged.empty() && !(merged.back().hi < p.lo)) {
        if (merged.back().hi < p.hi) merged.back().hi = p.hi;
      } else {
        merged.push_back(p);
      }
    }
    parts_ = std::move(merged);
  }

  std::vector<Interval<T>> parts_;
};

using IntervalUnion = IntervalSet<double>;
using RationalIntervalUnion = IntervalSet<Rational>;

template <typename T>
std::ostream& operator<<(std::ostream& os, const IntervalSet<T>& s) {
  os << '{';
  bool first = true;
  for (const auto& p : s) {
    if (!first) os << " u ";
    first = false;
    os << '[' << p.lo << ", " << p.hi << ')';
  }
  return os << '}';
}

/// Converts an exact set to doubles (endpoints rounded to nearest).
inline IntervalUnion to_double_set(const RationalIntervalUnion& s) {
  std::vector<Interval<double>> out;
  for (const auto& p : s) out.push_back({to_double(p.lo), to_double(p.hi)});
  return IntervalUnion(std::move(out));
}

/// Two-sided ball around `center` on the circle R/Z, reduced into [0,1).
template <typename T>
IntervalSet<T> circle_ball(const T& center, const T& radius) {
  if (!(radius > T(0))) return {};
  return IntervalSet<T>::single(center - radius, center + radius).wrapped();
}

}  // namespace repp
