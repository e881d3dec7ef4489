#pragma once
// Deterministic random numbers for reproducible Monte Carlo runs.
//
// std::normal_distribution and friends are implementation-defined, so the
// same seed gives different sequences on different standard libraries.
// Everything here is pinned: xoshiro256++ for the raw stream, splitmix64
// for seeding and substream derivation, polar Box-Muller for Gaussians.

#include <cmath>
#include <complex>
#include <cstdint>

namespace airlink {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// splitmix64 step: bijective mix, also fine as a standalone hash.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (seed, value). Used for the
// per-trial substreams: hash(seed, snr_index, trial_index) and the
// bits/fading/noise forks inside a trial.
inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept {
  return mix64(seed ^ mix64(value));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    // splitmix64 seeding as recommended for the xoshiro family
    std::uint64_t s = seed;
    for (auto& w : state_) w = (s = mix64(s));
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform in [0, 1), 53-bit resolution
  double next_unit() noexcept { return double(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (-1, 1]
  double next_signed_unit() noexcept { return 1.0 - 2.0 * next_unit(); }

  // N(0,1) via polar Box-Muller; consumes a variable number of draws but the
  // sequence is still a pure function of the seed.
  double next_gauss() noexcept {
    double x, y, s;
    do {
      x = next_signed_unit();
      y = next_signed_unit();
      s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    return x * std::sqrt(-2.0 * std::log(s) / s);
  }

  // circularly symmetric complex Gaussian with E|z|^2 = var_total
  cplx next_cgauss(double var_total) noexcept {
    double x, y, s;
    do {
      x = next_signed_unit();
      y = next_signed_unit();
      s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-var_total * std::log(s) / s);
    return {x * f, y * f};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace airlink
