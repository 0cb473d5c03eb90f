// Dynamical map descriptors, interval image/preimage machinery, and the
// floating-point orbit fallback.
//
// SystemSpec key-value grammar (see kv.hpp for the line syntax):
//   kind     = digit_shift | piecewise_affine | intermittent
//   bases    = b1[,b2,...]                       (digit_shift; one per coordinate)
//   branches = lo:hi:slope:offset[;...]          (piecewise_affine, rationals)
//   alpha    = a                                 (intermittent exponent, 0 < a < 1)
//   measure  = lebesgue | birkhoff               (default: lebesgue for
//                                                 digit_shift, birkhoff otherwise)
// A `zeta` key is tolerated and ignored, so that one block may describe
// both the system and the observable.
#pragma once

#include "repp/exact_real.hpp"
#include "repp/interval_set.hpp"
#include "repp/kv.hpp"
#include "repp/scalar.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace repp {

enum class SystemKind { DigitShift, PiecewiseAffine, Intermittent };
enum class MeasureKind { LebesgueInvariant, EmpiricalBirkhoff };

/// x in [lo, hi) maps to slope * x + offset.
struct AffineBranch {
  Rational lo, hi, slope, offset;
  bool operator==(const AffineBranch&) const = default;
};

struct SystemSpec {
  SystemKind kind = SystemKind::DigitShift;
  int dimension = 1;
  std::vector<int> bases;
  std::vector<AffineBranch> branches;
  double lsv_alpha = 0.5;
  MeasureKind measure = MeasureKind::LebesgueInvariant;

  static SystemSpec digit_shift(std::vector<int> bases);
  /// 2x mod 1 written as two affine branches.
  static SystemSpec doubling_affine();
  static SystemSpec affine(std::vector<AffineBranch> branches, MeasureKind measure);
  static SystemSpec intermittent(double alpha);

  /// Throws ConfigError on any broken invariant.
  void validate() const;

  /// Affine branches of a one-dimensional digit-shift or piecewise-affine map.
  std::vector<AffineBranch> affine_branches() const;

  KeyValueBlock to_kv() const;
  static SystemSpec from_kv(const KeyValueBlock& kv);

  bool operator==(const SystemSpec&) const = default;
};

std::string to_string(SystemKind k);

/// Exact image and preimage under the affine branches. Sets live in [0,1).
RationalIntervalUnion image(const SystemSpec& spec, const RationalIntervalUnion& s);
RationalIntervalUnion preimage(const SystemSpec& spec, const RationalIntervalUnion& s);
IntervalUnion image(const SystemSpec& spec, const IntervalUnion& s);
IntervalUnion preimage(const SystemSpec& spec, const IntervalUnion& s);

/// Interval-count ceiling for iterated images.
inline constexpr std::size_t kIntervalCap = 1'000'000;

/// Smallest r <= horizon with T^r(s) meeting s, or nullopt.
/// Throws CapError (whose message carries the last r reached) when the
/// iterated image exceeds kIntervalCap intervals.
std::optional<std::uint64_t> min_return_time(const SystemSpec& spec,
                                             const RationalIntervalUnion& s,
                                             std::uint64_t horizon);

/// Derivative of T^p at a p-periodic point.
Eigen::MatrixXd jacobian_at(const SystemSpec& spec, const std::vector<ExactReal>& zeta, int p);

/// Applies T once to a floating-point point.
std::vector<double> apply_float(const SystemSpec& spec, const std::vector<double>& x);

/// n iterates T(x0), ..., T^n(x0) in double precision. With `dither`, a
/// uniform perturbation of magnitude 2^-52 is added after each step. The
/// digit-shift engine must be preferred for acceptance runs; this path
/// exists for maps without an exact conjugacy.
std::vector<std::vector<double>> iterate_float(const SystemSpec& spec,
                                               const std::vector<double>& x0, std::uint64_t n,
                                               bool dither, std::uint64_t dither_seed = 0);

}  // namespace repp
