#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace qmlab::rng {

// SplitMix64 finalizer. Full avalanche, cheap, and bit-identical everywhere,
// which is what the reproducibility contracts need.
inline std::uint64_t hash64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// Counter-based mixing: derive an independent value from (key, counter...).
// Used for per-trial randomness so results do not depend on worker count.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
  return hash64(a + 0x9e3779b97f4a7c15ull + hash64(b + 0x517cc1b727220a95ull));
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return mix(mix(a, b), c);
}

// Small deterministic stream (SplitMix64 sequence).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) noexcept : state_(hash64(seed ^ 0x6a09e667f3bcc909ull)) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ull;
    return hash64(state_);
  }

  // Uniform in [0, 1).
  double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log argument.
  double next_double_open0() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller.
  double next_gaussian() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = next_double_open0();
    const double v = next_double();
    const double rad = std::sqrt(-2.0 * std::log(u));
    const double ang = 6.283185307179586476925286766559 * v;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  std::complex<double> next_complex_gaussian() noexcept {
    const double re = next_gaussian();
    const double im = next_gaussian();
    return {re, im};
  }

  // Uniform index in [0, n). Modulo bias is < n / 2^64, irrelevant at lab scale.
  std::size_t next_index(std::size_t n) noexcept {
    return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qmlab::rng
