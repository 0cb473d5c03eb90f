// Exact orbits of x -> (b_1 x_1, ..., b_d x_d) mod 1 by digit shifting.
//
// A uniformly random initial point has iid uniform base-b digits, and the
// map shifts its expansion left by one digit. The engine draws digits
// lazily from a seeded generator, so the point at time j is read off the
// digit window [j, j+K) with no rounding.
#pragma once

#include "repp/exact_real.hpp"
#include "repp/rng.hpp"
#include "repp/systems.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace repp {

/// Distance of an orbit point to a target, exact to within base^-K.
struct OrbitDistance {
  double value = 0.0;
  /// Set when value < 2 * base^-K, so the digits cannot separate the
  /// point from the target.
  bool unresolved = false;
};

/// One screened visit produced by DigitStreamOrbit::scan.
struct OrbitHit {
  std::uint64_t j = 0;
  int target = 0;
  double distance = 0.0;
  bool unresolved = false;
  /// Signed per-coordinate offsets x - zeta in (-1/2, 1/2].
  std::span<const double> offset;
};

/// Digit count suggested for runs of length n*horizon resolving marks down
/// to tau_min: ceil(log_b(n*horizon/tau_min)) + 16.
int suggested_resolution(int base, double n_times_horizon, double tau_min);

class DigitStreamOrbit {
 public:
  /// Engine for `spec` (kind DigitShift) visiting each point of `targets`.
  /// Throws ResolutionError when resolution exceeds kMaxDigits.
  DigitStreamOrbit(const SystemSpec& spec, std::vector<std::vector<ExactReal>> targets,
                   int resolution, std::uint64_t seed);

  /// Same, with the stream of coordinate c starting with `leading[c]`.
  DigitStreamOrbit(const SystemSpec& spec, std::vector<std::vector<ExactReal>> targets,
                   int resolution, std::uint64_t seed,
                   const std::vector<std::vector<std::uint8_t>>& leading);

  int dimension() const { return static_cast<int>(coords_.size()); }
  int resolution() const { return resolution_; }
  std::size_t target_count() const { return targets_.size(); }
  std::uint64_t index() const { return index_; }

  /// Distance of the current point T^j x to target t.
  OrbitDistance distance(int target = 0);

  /// Advances by one and returns the distance of the new point.
  OrbitDistance step(int target = 0);

  void advance(std::uint64_t count) { index_ += count; }

  /// Signed offsets of the current point from target t.
  std::vector<double> offset(int target = 0);

  /// Digits of coordinate c at absolute positions [from, from+count).
  std::vector<std::uint8_t> digits(int coordinate, std::uint64_t from, std::size_t count);

  /// Visits every j in [index(), index()+count) whose point lies within
  /// Euclidean distance radius[t] of target t (radius.size() must equal
  /// target_count()). Leaves index() at the end of the range.
  template <typename Visitor>
  void scan(std::uint64_t count, std::span<const double> radius, Visitor&& visit);

 private:
  struct Coordinate {
    int base = 2;
    Engine engine;
    int per_draw = 0;            // digits extracted from one 64-bit draw
    std::uint64_t draw_modulus = 0;  // base^per_draw (0 encodes 2^64)
    std::uint64_t accept_below = 0;  // rejection bound (0 encodes "accept all")
    std::vector<std::uint8_t> buffer;
    std::uint64_t buffer_start = 0;  // absolute position of buffer[0]
    std::vector<std::uint8_t> pending;  // leading digits not yet consumed
  };

  void init(const SystemSpec& spec, std::vector<std::vector<ExactReal>> targets,
            int resolution, std::uint64_t seed,
            const std::vector<std::vector<std::uint8_t>>& leading);
  void ensure(Coordinate& c, std::uint64_t end);
  void refill(Coordinate& c);
  void compact(Coordinate& c);
  // Signed offset of coordinate c at absolute position j from target t;
  // sets `unresolved` when fewer than two units of base^-K separate them.
  double coordinate_offset(int c, std::uint64_t j, int t, bool& unresolved);
  // Screening window width for coordinate c at a given radius.
  int window_digits(int c, double radius) const;
  bool visit_candidate(std::uint64_t j, int t, double radius, OrbitHit& hit);

  std::vector<Coordinate> coords_;
  std::vector<std::vector<std::vector<std::uint8_t>>> target_digits_;  // [t][c][k]
  std::vector<std::vector<ExactReal>> targets_;
  int resolution_ = 0;
  std::uint64_t index_ = 0;
  std::vector<double> offset_scratch_;
};

template <typename Visitor>
void DigitStreamOrbit::scan(std::uint64_t count, std::span<const double> radius,
                            Visitor&& visit) {
  if (radius.size() != targets_.size())
    throw DomainError("scan needs one radius per target");
  if (count == 0) return;
  const std::uint64_t start = index_;
  const std::uint64_t end = start + count;
  Coordinate& c0 = coords_[0];
  const std::uint64_t b = static_cast<std::uint64_t>(c0.base);

  double widest = 0.0;
  for (double r : radius) widest = std::max(widest, r);
  const int m = window_digits(0, widest);
  std::uint64_t bm = 1;
  for (int i = 0; i < m; ++i) bm *= b;
  const std::uint64_t top = bm / b;  // weight of the leading window digit

  const std::size_t nt = targets_.size();
  std::vector<std::uint64_t> prefix(nt, 0);
  for (std::size_t t = 0; t < nt; ++t)
    for (int i = 0; i < m; ++i) prefix[t] = prefix[t] * b + target_digits_[t][0][static_cast<std::size_t>(i)];

  OrbitHit hit;
  // Work through the range in chunks so the digit buffer stays bounded.
  constexpr std::uint64_t kChunk = 1u << 20;
  std::uint64_t j = start;
  while (j < end) {
    const std::uint64_t stop = std::min(end, j + kChunk);
    ensure(c0, stop + static_cast<std::uint64_t>(resolution_) + 1);
    const std::uint8_t* d = c0.buffer.data() - c0.buffer_start;
    std::uint64_t w = 0;
    for (int i = 0; i < m; ++i) w = w * b + d[j + static_cast<std::uint64_t>(i)];
    for (std::uint64_t k = j; k < stop; ++k) {
      for (std::size_t t = 0; t < nt; ++t) {
        // Window within one unit of the target prefix (mod b^m).
        std::uint64_t diff = w + bm + 1 - prefix[t];
        if (diff >= bm) diff -= bm;
        if (diff >= bm) diff -= bm;
        if (diff <= 2) {
          if (visit_candidate(k, static_cast<int>(t), radius[t], hit)) visit(static_cast<const OrbitHit&>(hit));
          d = c0.buffer.data() - c0.buffer_start;
        }
      }
      if (m > 0) w = (w - d[k] * top) * b + d[k + static_cast<std::uint64_t>(m)];
    }
    j = stop;
    index_ = j;
    for (auto& c : coords_) compact(c);
  }
  index_ = end;
}

}  // namespace repp
