#pragma once
// Unitary DFT/IDFT (iterative radix-2, power-of-two lengths) and the
// order-2 Walsh-Hadamard transform. Both directions scale by 1/sqrt(N)
// so round trips and energy are exact, which the receivers rely on.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "airlink/rng.hpp"  // cplx, kPi

namespace airlink {

using CVec = std::vector<cplx>;

inline constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

namespace detail {

inline bool is_pow2(std::size_t n) noexcept { return n >= 2 && (n & (n - 1)) == 0; }

struct FftPlan {
  std::vector<std::uint32_t> bitrev;  // index permutation
  CVec twiddle;                       // exp(-i 2 pi k / n), k < n/2
};

inline const FftPlan& fft_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, FftPlan> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  FftPlan p;
  p.bitrev.resize(n);
  std::uint32_t rev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    p.bitrev[i] = rev;
    // increment rev as a reversed counter
    std::size_t mask = n >> 1;
    while (rev & mask) {
      rev ^= static_cast<std::uint32_t>(mask);
      mask >>= 1;
    }
    rev ^= static_cast<std::uint32_t>(mask);
  }
  p.twiddle.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * kPi * double(k) / double(n);
    p.twiddle[k] = {std::cos(ang), std::sin(ang)};
  }
  return cache.emplace(n, std::move(p)).first->second;
}

inline void fft_radix2(CVec& x, bool inverse) {
  const std::size_t n = x.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two >= 2");
  const FftPlan& plan = fft_plan(n);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = plan.bitrev[i];
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t j = 0; j < half; ++j) {
        cplx w = plan.twiddle[j * step];
        if (inverse) w = std::conj(w);
        const cplx u = x[base + j];
        const cplx v = x[base + j + half] * w;
        x[base + j] = u + v;
        x[base + j + half] = u - v;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(double(n));
  for (auto& v : x) v *= scale;
}

}  // namespace detail

inline void dft_inplace(CVec& x) { detail::fft_radix2(x, false); }
inline void idft_inplace(CVec& x) { detail::fft_radix2(x, true); }

inline CVec dft(CVec x) {
  dft_inplace(x);
  return x;
}
inline CVec idft(CVec x) {
  idft_inplace(x);
  return x;
}

// 2-point WHT, self-inverse: [p0+p1, p0-p1] / sqrt(2)
inline std::array<cplx, 2> wht2(const std::array<cplx, 2>& p) noexcept {
  return {(p[0] + p[1]) * kInvSqrt2, (p[0] - p[1]) * kInvSqrt2};
}

}  // namespace airlink
