// Finite unions of half-open axis-aligned boxes in R^d.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace repp {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool empty() const;
  bool contains(std::span<const double> x) const;
  Box intersect(const Box& other) const;
  /// Image under x -> diag(scale) x for positive or negative scales.
  Box scaled(std::span<const double> scale) const;
  bool operator==(const Box&) const = default;
};

/// Boxes may overlap on input; measure() always reports the measure of
/// the union.
class BoxUnion {
 public:
  BoxUnion() = default;
  explicit BoxUnion(std::vector<Box> boxes);

  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }
  int dimension() const { return boxes_.empty() ? 0 : boxes_.front().dimension(); }

  bool contains(std::span<const double> x) const;
  double measure() const;
  /// Smallest box containing every piece.
  Box bounding_box() const;

  BoxUnion unite(const BoxUnion& other) const;
  BoxUnion intersect(const BoxUnion& other) const;

 private:
  std::vector<Box> boxes_;
};

/// Leb(a \ removed), exact by coordinate compression.
double difference_measure(const BoxUnion& a, const BoxUnion& removed);

}  // namespace repp
