#pragma once
// Closed-form references the self-checks compare against. Kept separate
// from the simulation code paths on purpose.

#include <cmath>
#include <stdexcept>

#include "airlink/rng.hpp"
#include "airlink/transform.hpp"

namespace airlink {

inline double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// BPSK with L-branch maximal-ratio combining over i.i.d. Rayleigh branches,
// mean branch SNR gbar:
//   p = (1 - mu) / 2,  mu = sqrt(gbar / (1 + gbar))
//   BER = p^L * sum_{l=0}^{L-1} C(L-1+l, l) (1-p)^l
// A 2x2 Alamouti link with total transmit power 1 is the L = 4 case with
// gbar = snr_linear / 2.
inline double mrc_bpsk_ber(int branches, double mean_branch_snr) {
  if (branches < 1 || mean_branch_snr < 0.0) throw std::invalid_argument("mrc_bpsk_ber: bad args");
  const double mu = std::sqrt(mean_branch_snr / (1.0 + mean_branch_snr));
  const double p = 0.5 * (1.0 - mu);
  double sum = 0.0, coeff = 1.0;
  for (int l = 0; l < branches; ++l) {
    if (l > 0) coeff = coeff * double(branches - 1 + l) / double(l);
    sum += coeff * std::pow(1.0 - p, l);
  }
  return std::pow(p, branches) * sum;
}

// Brute-force counterpart: draw the four Rayleigh links of a 2x2 channel
// and average the conditional BPSK error rate Q(sqrt(g / noise_var)).
inline double mrc4_ber_numeric(double snr_db, int n_draws, std::uint64_t seed) {
  Rng rng(seed);
  const double noise_var = std::pow(10.0, -snr_db / 10.0);
  double acc = 0.0;
  for (int i = 0; i < n_draws; ++i) {
    double g = 0.0;
    for (int l = 0; l < 4; ++l) g += std::norm(rng.next_cgauss(1.0));
    acc += qfunc(std::sqrt(g / noise_var));
  }
  return acc / double(n_draws);
}

// Direct O(N^2) transform used as an independent check of the radix-2 path.
// sign -1 is the forward direction; both are scaled by 1/sqrt(N).
inline CVec naive_dft(const CVec& x, int sign) {
  const std::size_t n = x.size();
  CVec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double ang = sign * 2.0 * kPi * double(m) * double(k) / double(n);
      acc += x[m] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = acc / std::sqrt(double(n));
  }
  return out;
}

}  // namespace airlink
