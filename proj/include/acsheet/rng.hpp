#pragma once

#include <cstdint>
#include <cmath>

namespace acsheet {

// splitmix64 finalizer: full-avalanche 64-bit mix. All reproducible sampling
// in the project is built from this stateless hash, so every random quantity
// is a pure function of (seed, counters).
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Fold one more word into a running hash.
inline constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t w) noexcept {
  return mix64(h ^ (w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

// Map a hash to the open interval (0,1); never returns 0 or 1.
inline double unit_open(std::uint64_t h) noexcept {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal as a pure function of a 64-bit key (Box-Muller; the sine
// partner is discarded so each key yields exactly one value).
inline double gaussian_at(std::uint64_t key) noexcept {
  const double u1 = unit_open(hash_combine(key, 0x6a09e667f3bcc909ULL));
  const double u2 = unit_open(hash_combine(key, 0xbb67ae8584caa73bULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Sequential generator for auxiliary sampling (synthetic clouds, random test
// inputs). Deterministic splitmix64 stream; no libstdc++ distributions so the
// stream is pinned by this file alone.
class SmallRng {
 public:
  explicit SmallRng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  double uniform() noexcept { return unit_open(next_u64()); }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  double gaussian() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) noexcept { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace acsheet
