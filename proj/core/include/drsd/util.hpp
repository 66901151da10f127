#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace drsd {

/// Floor division, rounding toward -inf (unlike C++ integer division).
constexpr int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Nonnegative remainder, a - floor_div(a,b)*b. Requires b > 0.
constexpr int64_t pos_mod(int64_t a, int64_t b) {
  int64_t r = a % b;
  return r < 0 ? r + b : r;
}

/// splitmix64 step; used to derive independent stream seeds from
/// (master seed, index) pairs so results do not depend on worker count.
constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr uint64_t derive_seed(uint64_t master, uint64_t index, uint64_t purpose = 0) {
  return splitmix64(splitmix64(master ^ splitmix64(index)) + purpose);
}

/// Seeded generator wrapper. mt19937_64 output is pinned by the standard,
/// and doubles are built by explicit bit manipulation, so streams replay
/// exactly for a fixed seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  uint64_t next_below(uint64_t n) {
    // Rejection against the last partial block keeps the draw unbiased.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  bool next_bit() { return (gen_() >> 63) != 0; }

  /// Standard normal via Marsaglia's polar method.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace drsd
