// Point measures on [0, H) x marks, the common currency of empirical and
// sampled processes, and the rectangle families they are counted on.
#pragma once

#include "repp/box_union.hpp"
#include "repp/interval_set.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace repp {

struct Window {
  double horizon = 1.0;
  /// Mark cap tau_max for scalar marks, or the spatial radius for vector marks.
  double mark_cap = 10.0;
  bool operator==(const Window&) const = default;
};

/// Atoms (t, marks) sorted by t. Atoms sharing a time keep insertion order.
class PointMeasure {
 public:
  explicit PointMeasure(int mark_dim = 1, Window window = {});

  int mark_dim() const { return mark_dim_; }
  const Window& window() const { return window_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  double time(std::size_t i) const { return times_[i]; }
  double mark(std::size_t i, int k = 0) const {
    return marks_[i * static_cast<std::size_t>(mark_dim_) + static_cast<std::size_t>(k)];
  }
  std::span<const double> marks(std::size_t i) const {
    return {marks_.data() + i * static_cast<std::size_t>(mark_dim_),
            static_cast<std::size_t>(mark_dim_)};
  }
  const std::vector<double>& times() const { return times_; }

  /// Appends an atom; if it precedes the last atom in time the measure is
  /// re-sorted lazily by sort().
  void add(double t, std::span<const double> marks);
  void add(double t, double mark) { add(t, std::span<const double>(&mark, 1)); }
  void add(double t) { add(t, std::span<const double>()); }

  /// Stable sort by time.
  void sort();
  bool sorted() const;

  bool operator==(const PointMeasure&) const = default;

 private:
  int mark_dim_;
  Window window_;
  std::vector<double> times_;
  std::vector<double> marks_;
};

/// CSV rows `run_id,t,mark1[,mark2...]` with 17 significant digits.
void write_csv_header(std::ostream& os, int mark_dim);
void write_csv_rows(std::ostream& os, std::uint64_t run_id, const PointMeasure& pm);
/// Parses rows written by write_csv_rows; returns one measure per run id,
/// ordered by id (ids must be 0..R-1 contiguous or sparse ones map to
/// empty measures).
std::vector<PointMeasure> read_csv(std::istream& is, Window window);

/// Cell E_k = J_k x A_k with J_k = [a, b). Scalar-mark cells count marks
/// in (lo, hi] for each piece [lo, hi) of `marks`; vector-mark cells count
/// marks inside `boxes`.
struct Cell {
  double a = 0.0;
  double b = 1.0;
  IntervalUnion marks;
  BoxUnion boxes;

  double time_length() const { return b - a; }
  bool contains_mark(std::span<const double> m) const;
};

struct RectangleFamily {
  std::vector<Cell> cells;

  /// Throws DomainError unless the J_k are ordered and disjoint.
  void validate() const;
  /// Sum of tau-lengths of the mark sets, weighted by nothing.
  double total_mark_length() const;
};

/// Counts per cell under the half-open conventions of Cell.
std::vector<std::uint64_t> count_in(const PointMeasure& pm, const RectangleFamily& fam);

/// 20 fixed families of bands and time intervals inside [0,1) x [0,10).
std::vector<RectangleFamily> standard_grid();

/// 20 fixed families of boxes and time intervals inside [0,1) x B(0, radius).
std::vector<RectangleFamily> standard_grid_multi(double radius);

}  // namespace repp
