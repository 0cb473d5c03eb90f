#include "repp/digit_orbit.hpp"

#include "repp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace repp {

namespace {

using u128 = unsigned __int128;

template <unsigned B>
void extract(std::uint64_t x, int count, std::uint8_t* out) {
  for (int i = count - 1; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(x % B);
    x /= B;
  }
}

void extract_runtime(std::uint64_t x, unsigned b, int count, std::uint8_t* out) {
  for (int i = count - 1; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(x % b);
    x /= b;
  }
}

constexpr std::size_t kCompactThreshold = 1u << 21;

}  // namespace

int suggested_resolution(int base, double n_times_horizon, double tau_min) {
  if (base < 2) throw DomainError("digit base must be at least 2");
  if (!(n_times_horizon > 0.0) || !(tau_min > 0.0))
    throw DomainError("resolution needs positive run length and tau_min");
  const double digits = std::log(n_times_horizon / tau_min) / std::log(static_cast<double>(base));
  return static_cast<int>(std::ceil(std::max(digits, 1.0))) + 16;
}

DigitStreamOrbit::DigitStreamOrbit(const SystemSpec& spec,
                                   std::vector<std::vector<ExactReal>> targets, int resolution,
                                   std::uint64_t seed) {
  init(spec, std::move(targets), resolution, seed, {});
}

DigitStreamOrbit::DigitStreamOrbit(const SystemSpec& spec,
                                   std::vector<std::vector<ExactReal>> targets, int resolution,
                                   std::uint64_t seed,
                                   const std::vector<std::vector<std::uint8_t>>& leading) {
  init(spec, std::move(targets), resolution, seed, leading);
}

void DigitStreamOrbit::init(const SystemSpec& spec, std::vector<std::vector<ExactReal>> targets,
                            int resolution, std::uint64_t seed,
                            const std::vector<std::vector<std::uint8_t>>& leading) {
  if (spec.kind != SystemKind::DigitShift)
    throw UnsupportedError("DigitStreamOrbit needs a digit_shift system");
  spec.validate();
  if (resolution < 1 || resolution > kMaxDigits)
    throw ResolutionError("resolution " + std::to_string(resolution) +
                          " outside [1, " + std::to_string(kMaxDigits) + "]");
  if (targets.empty()) throw DomainError("DigitStreamOrbit needs at least one target");
  if (leading.size() > static_cast<std::size_t>(spec.dimension))
    throw DomainError("more leading digit streams than coordinates");
  resolution_ = resolution;
  targets_ = std::move(targets);
  coords_.resize(static_cast<std::size_t>(spec.dimension));
  for (int c = 0; c < spec.dimension; ++c) {
    Coordinate& co = coords_[static_cast<std::size_t>(c)];
    co.base = spec.bases[static_cast<std::size_t>(c)];
    co.engine.seed(derive_seed(seed, static_cast<std::uint64_t>(c)));
    u128 mod = 1;
    int per = 0;
    while (mod * static_cast<u128>(co.base) <= (static_cast<u128>(1) << 64)) {
      mod *= static_cast<u128>(co.base);
      ++per;
    }
    co.per_draw = per;
    if (mod == (static_cast<u128>(1) << 64)) {
      co.draw_modulus = 0;
      co.accept_below = 0;
    } else {
      co.draw_modulus = static_cast<std::uint64_t>(mod);
      const u128 accept = ((static_cast<u128>(1) << 64) / mod) * mod;
      co.accept_below =
          accept == (static_cast<u128>(1) << 64) ? 0 : static_cast<std::uint64_t>(accept);
    }
    if (static_cast<std::size_t>(c) < leading.size()) {
      for (auto dgt : leading[static_cast<std::size_t>(c)])
        if (dgt >= co.base) throw DomainError("leading digit out of range for its base");
      co.pending = leading[static_cast<std::size_t>(c)];
    }
  }
  target_digits_.resize(targets_.size());
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    if (static_cast<int>(targets_[t].size()) != spec.dimension)
      throw DomainError("target dimension does not match the system");
    for (int c = 0; c < spec.dimension; ++c)
      target_digits_[t].push_back(
          targets_[t][static_cast<std::size_t>(c)].digits(spec.bases[static_cast<std::size_t>(c)],
                                                          resolution_));
  }
  offset_scratch_.assign(coords_.size(), 0.0);
}

void DigitStreamOrbit::refill(Coordinate& c) {
  if (!c.pending.empty()) {
    c.buffer.insert(c.buffer.end(), c.pending.begin(), c.pending.end());
    c.pending.clear();
    return;
  }
  std::uint64_t x = c.engine();
  if (c.accept_below != 0)
    while (x >= c.accept_below) x = c.engine();
  if (c.draw_modulus != 0) x %= c.draw_modulus;
  const std::size_t at = c.buffer.size();
  c.buffer.resize(at + static_cast<std::size_t>(c.per_draw));
  std::uint8_t* out = c.buffer.data() + at;
  switch (c.base) {
    case 2: extract<2>(x, c.per_draw, out); break;
    case 3: extract<3>(x, c.per_draw, out); break;
    case 5: extract<5>(x, c.per_draw, out); break;
    case 10: extract<10>(x, c.per_draw, out); break;
    default: extract_runtime(x, static_cast<unsigned>(c.base), c.per_draw, out); break;
  }
}

void DigitStreamOrbit::ensure(Coordinate& c, std::uint64_t end) {
  if (end <= c.buffer_start + c.buffer.size()) return;
  const std::size_t need = static_cast<std::size_t>(end - c.buffer_start) + 64;
  if (need > c.buffer.capacity()) c.buffer.reserve(std::max(need, 2 * c.buffer.capacity()));
  while (c.buffer_start + c.buffer.size() < end) refill(c);
}

void DigitStreamOrbit::compact(Coordinate& c) {
  if (index_ <= c.buffer_start) return;
  const std::uint64_t drop = std::min<std::uint64_t>(index_ - c.buffer_start, c.buffer.size());
  if (drop < kCompactThreshold) return;
  c.buffer.erase(c.buffer.begin(), c.buffer.begin() + static_cast<std::ptrdiff_t>(drop));
  c.buffer_start += drop;
}

int DigitStreamOrbit::window_digits(int c, double radius) const {
  const double b = coords_[static_cast<std::size_t>(c)].base;
  // Largest m with b^-m >= radius, b^(m+1) <= 2^62 and m <= K.
  int m = 0;
  double scale = 1.0;
  while (m < resolution_ && scale / b >= radius && scale * b * b <= 0x1.0p62) {
    scale /= b;
    ++m;
  }
  return m;
}

double DigitStreamOrbit::coordinate_offset(int ci, std::uint64_t j, int t, bool& unresolved) {
  Coordinate& c = coords_[static_cast<std::size_t>(ci)];
  const std::size_t k = static_cast<std::size_t>(resolution_);
  ensure(c, j + k);
  if (j < c.buffer_start) throw StateError("orbit digits before the current position were discarded");
  const std::uint8_t* x = c.buffer.data() + (j - c.buffer_start);
  const std::uint8_t* z = target_digits_[static_cast<std::size_t>(t)][static_cast<std::size_t>(ci)].data();
  const int b = c.base;

  // diff = (X - Z) mod b^K, least significant digit last.
  thread_local std::vector<int> diff;
  diff.resize(k);
  int borrow = 0;
  for (std::size_t i = k; i-- > 0;) {
    int v = static_cast<int>(x[i]) - static_cast<int>(z[i]) - borrow;
    borrow = v < 0;
    diff[i] = v + (borrow ? b : 0);
  }
  // negative iff 2*diff > b^K.
  int carry = 0;
  bool low_nonzero = false;
  for (std::size_t i = k; i-- > 0;) {
    const int v = 2 * diff[i] + carry;
    carry = v >= b;
    low_nonzero = low_nonzero || (v % b) != 0;
  }
  const bool negative = carry && low_nonzero;
  if (negative) {
    // b^K - diff
    int br = 0;
    for (std::size_t i = k; i-- > 0;) {
      int v = -diff[i] - br;
      br = v < 0;
      diff[i] = v + (br ? b : 0);
    }
  }
  long double v = 0.0L;
  for (std::size_t i = k; i-- > 0;) v = (v + diff[i]) / b;
  bool small = true;
  for (std::size_t i = 0; i + 1 < k && small; ++i) small = diff[i] == 0;
  unresolved = unresolved || (small && diff[k - 1] < 2);
  return static_cast<double>(negative ? -v : v);
}

bool DigitStreamOrbit::visit_candidate(std::uint64_t j, int t, double radius, OrbitHit& hit) {
  bool unresolved = false;
  double sq = 0.0;
  for (int c = 0; c < dimension(); ++c) {
    const double o = coordinate_offset(c, j, t, unresolved);
    offset_scratch_[static_cast<std::size_t>(c)] = o;
    sq += o * o;
    if (sq >= radius * radius && !unresolved) return false;
  }
  const double dist = std::sqrt(sq);
  if (!(dist < radius)) return false;
  hit.j = j;
  hit.target = t;
  hit.distance = dist;
  hit.unresolved = unresolved;
  hit.offset = std::span<const double>(offset_scratch_);
  return true;
}

OrbitDistance DigitStreamOrbit::distance(int target) {
  if (target < 0 || static_cast<std::size_t>(target) >= targets_.size())
    throw DomainError("target index out of range");
  bool unresolved = false;
  double sq = 0.0;
  for (int c = 0; c < dimension(); ++c) {
    const double o = coordinate_offset(c, index_, target, unresolved);
    sq += o * o;
  }
  return {std::sqrt(sq), unresolved};
}

OrbitDistance DigitStreamOrbit::step(int target) {
  ++index_;
  for (auto& c : coords_) compact(c);
  return distance(target);
}

std::vector<double> DigitStreamOrbit::offset(int target) {
  std::vector<double> out;
  bool unresolved = false;
  for (int c = 0; c < dimension(); ++c) out.push_back(coordinate_offset(c, index_, target, unresolved));
  return out;
}

std::vector<std::uint8_t> DigitStreamOrbit::digits(int coordinate, std::uint64_t from,
                                                   std::size_t count) {
  Coordinate& c = coords_.at(static_cast<std::size_t>(coordinate));
  ensure(c, from + count);
  if (from < c.buffer_start) throw StateError("requested digits were already discarded");
  const auto* p = c.buffer.data() + (from - c.buffer_start);
  return {p, p + count};
}

}  // namespace repp
