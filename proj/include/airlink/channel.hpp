#pragma once
// Frequency-selective 2x2 Rayleigh channel:
//   - tapped delay line profiles (integer sample delays, unit total power)
//   - sum-of-sinusoids Doppler fading per tap
//   - time-domain convolution, AWGN, and per-subcarrier CSI extraction
//
// Each tap is a sum of 16 oscillators with random Doppler angles and
// complex Gaussian amplitudes. Gaussian amplitudes (rather than the classic
// equal-magnitude phasors) make every tap exactly Rayleigh at any instant
// and give the ensemble autocorrelation gain * J0(2 pi fd tau) with no
// finite-oscillator bias, which the BER references assume.

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "airlink/rng.hpp"
#include "airlink/transform.hpp"

namespace airlink {

struct PowerDelayProfile {
  std::string name;           // ch1 | ch2 | ch3 | flat | custom
  std::vector<int> delays;    // sample offsets, strictly increasing, first is 0
  std::vector<double> gains;  // linear average powers

  int max_delay() const noexcept { return delays.empty() ? 0 : delays.back(); }

  void validate(int cp_len) const {
    if (delays.empty() || delays.size() != gains.size())
      throw std::invalid_argument("profile: delay/gain lists empty or mismatched");
    if (delays.front() != 0) throw std::invalid_argument("profile: first delay must be 0");
    double sum = 0.0;
    for (std::size_t i = 0; i < delays.size(); ++i) {
      if (i > 0 && delays[i] <= delays[i - 1])
        throw std::invalid_argument("profile: delays must be strictly increasing");
      if (gains[i] <= 0.0) throw std::invalid_argument("profile: gains must be positive");
      sum += gains[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("profile: gains must sum to 1");
    if (max_delay() > cp_len)
      throw std::invalid_argument("profile: max delay exceeds the cyclic prefix");
  }
};

inline PowerDelayProfile make_profile(std::string_view name) {
  if (name == "ch1") return {"ch1", {0, 1, 2, 3, 4}, {0.35, 0.25, 0.18, 0.13, 0.09}};
  if (name == "ch2") return {"ch2", {0, 1, 2, 6, 11}, {0.34, 0.28, 0.23, 0.11, 0.04}};
  if (name == "ch3") return {"ch3", {0, 4, 8, 12}, {0.25, 0.25, 0.25, 0.25}};
  if (name == "flat") return {"flat", {0}, {1.0}};
  throw std::invalid_argument("unknown channel profile: " + std::string(name));
}

// Custom profile file: '#' comments, two 'key = v0, v1, ...' lines
//   delays = 0, 1, 2
//   gains  = 0.5, 0.3, 0.2
inline PowerDelayProfile load_profile(std::istream& in) {
  PowerDelayProfile p;
  p.name = "custom";
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    std::string vals = line.substr(eq + 1);
    for (auto& ch : vals)
      if (ch == ',') ch = ' ';
    std::istringstream vs(vals);
    if (key == "delays") {
      int d;
      while (vs >> d) p.delays.push_back(d);
    } else if (key == "gains") {
      double g;
      while (vs >> g) p.gains.push_back(g);
    } else if (!key.empty()) {
      throw std::invalid_argument("profile file: unknown key '" + key + "'");
    }
  }
  return p;
}

inline PowerDelayProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open profile file: " + path);
  return load_profile(in);
}

// RMS delay spread squared, in samples^2: E[d^2] - E[d]^2 under the gain weights
inline double delay_spread(const PowerDelayProfile& p) {
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < p.delays.size(); ++i) {
    m1 += p.gains[i] * p.delays[i];
    m2 += p.gains[i] * p.delays[i] * p.delays[i];
  }
  return m2 - m1 * m1;
}

enum class FadingMode { Static, Block, Sample };

inline constexpr int kJakesOscillators = 16;

// One tap: h(t) = sum_i amp[i] * exp(j * omega[i] * t)
struct TapProcess {
  std::array<cplx, kJakesOscillators> amp;
  std::array<double, kJakesOscillators> omega;  // rad/s

  cplx eval(double t_sec) const noexcept {
    cplx acc = 0.0;
    for (int i = 0; i < kJakesOscillators; ++i) {
      const double ph = omega[i] * t_sec;
      acc += amp[i] * cplx(std::cos(ph), std::sin(ph));
    }
    return acc;
  }
};

// Fading for all four tx/rx links over a frame of n_samples.
//   Static: one draw held for the whole frame
//   Block:  tap values sampled once per block_len samples (OFDM symbol)
//   Sample: tap values evaluated at every sample instant
struct FadingProcess {
  PowerDelayProfile pdp;
  double fd_hz = 0.0;
  FadingMode mode = FadingMode::Static;
  double sample_dt = 0.0;
  int block_len = 0;
  int n_samples = 0;

  static constexpr int link_index(int s, int v) noexcept { return 2 * s + v; }

  std::array<std::vector<TapProcess>, 4> taps;  // [link][tap]
  std::array<std::vector<CVec>, 4> gain;        // [link][tap][instant]

  cplx tap_gain(int link, int tap, int n) const noexcept {
    const CVec& g = gain[link][tap];
    switch (mode) {
      case FadingMode::Static:
        return g[0];
      case FadingMode::Block:
        return g[n / block_len];
      default:
        return g[n];
    }
  }
};

// Reuse-friendly variant; the wrapper below allocates a fresh process.
inline void generate_fading_into(const PowerDelayProfile& pdp, double fd_hz, int n_samples,
                                 FadingMode mode, Rng& rng, double sample_dt, int block_len,
                                 FadingProcess& out) {
  if (n_samples <= 0) throw std::invalid_argument("fading: n_samples must be positive");
  if (fd_hz < 0.0) throw std::invalid_argument("fading: negative Doppler");
  if (mode != FadingMode::Static && (sample_dt <= 0.0 || block_len <= 0))
    throw std::invalid_argument("fading: sample_dt and block_len required");

  out.pdp = pdp;
  out.fd_hz = fd_hz;
  out.mode = mode;
  out.sample_dt = sample_dt;
  out.block_len = block_len;
  out.n_samples = n_samples;

  const int n_taps = int(pdp.delays.size());
  const int n_instants = mode == FadingMode::Static  ? 1
                         : mode == FadingMode::Block ? (n_samples + block_len - 1) / block_len
                                                     : n_samples;

  for (int link = 0; link < 4; ++link) {
    out.taps[link].resize(n_taps);
    out.gain[link].resize(n_taps);
    for (int l = 0; l < n_taps; ++l) {
      TapProcess& tp = out.taps[link][l];
      if (mode == FadingMode::Static && fd_hz == 0.0) {
        // frozen oscillators collapse to one Rayleigh draw per tap
        tp.omega.fill(0.0);
        tp.amp.fill(cplx(0.0));
        tp.amp[0] = rng.next_cgauss(pdp.gains[l]);
        out.gain[link][l].assign(1, tp.amp[0]);
        continue;
      }
      const double osc_var = pdp.gains[l] / kJakesOscillators;
      for (int i = 0; i < kJakesOscillators; ++i) {
        const double alpha = 2.0 * kPi * rng.next_unit();  // arrival angle
        tp.omega[i] = 2.0 * kPi * fd_hz * std::cos(alpha);
        tp.amp[i] = rng.next_cgauss(osc_var);
      }

      CVec& g = out.gain[link][l];
      g.assign(n_instants, cplx(0.0));
      if (mode == FadingMode::Static) {
        for (int i = 0; i < kJakesOscillators; ++i) g[0] += tp.amp[i];
      } else if (mode == FadingMode::Block) {
        for (int b = 0; b < n_instants; ++b)
          g[b] = tp.eval(double(b) * double(block_len) * sample_dt);
      } else {
        // phasor recurrence: rotate each oscillator by exp(j omega dt) per sample
        std::array<cplx, kJakesOscillators> ph, rot;
        for (int i = 0; i < kJakesOscillators; ++i) {
          ph[i] = tp.amp[i];
          const double a = tp.omega[i] * sample_dt;
          rot[i] = {std::cos(a), std::sin(a)};
        }
        for (int n = 0; n < n_instants; ++n) {
          cplx acc = 0.0;
          for (int i = 0; i < kJakesOscillators; ++i) {
            acc += ph[i];
            ph[i] *= rot[i];
          }
          g[n] = acc;
        }
      }
    }
  }
}

inline FadingProcess generate_fading(const PowerDelayProfile& pdp, double fd_hz, int n_samples,
                                     FadingMode mode, Rng& rng, double sample_dt = 0.0,
                                     int block_len = 0) {
  FadingProcess f;
  generate_fading_into(pdp, fd_hz, n_samples, mode, rng, sample_dt, block_len, f);
  return f;
}

// y_v[n] = sum_s sum_l h_l(s,v; offset+n) * x_s[n - delay_l]; samples before
// the frame start are zero, the tail beyond the frame is dropped.
inline void apply_channel(const CVec& tx1, const CVec& tx2, const FadingProcess& f, int offset,
                          CVec& rx1, CVec& rx2) {
  if (tx1.size() != tx2.size()) throw std::invalid_argument("apply_channel: frame size mismatch");
  const int len = int(tx1.size());
  if (offset < 0 || offset + len > f.n_samples)
    throw std::invalid_argument("apply_channel: fading does not cover the frame");

  rx1.assign(len, cplx(0.0));
  rx2.assign(len, cplx(0.0));
  const int n_taps = int(f.pdp.delays.size());

  for (int v = 0; v < 2; ++v) {
    CVec& rx = v == 0 ? rx1 : rx2;
    for (int s = 0; s < 2; ++s) {
      const CVec& tx = s == 0 ? tx1 : tx2;
      const int link = FadingProcess::link_index(s, v);
      for (int l = 0; l < n_taps; ++l) {
        const int d = f.pdp.delays[l];
        if (f.mode == FadingMode::Static) {
          const cplx h = f.gain[link][l][0];
          for (int n = d; n < len; ++n) rx[n] += h * tx[n - d];
        } else if (f.mode == FadingMode::Block) {
          for (int n = d; n < len; ++n)
            rx[n] += f.gain[link][l][(offset + n) / f.block_len] * tx[n - d];
        } else {
          const CVec& g = f.gain[link][l];
          for (int n = d; n < len; ++n) rx[n] += g[offset + n] * tx[n - d];
        }
      }
    }
  }
}

// circularly symmetric white noise, E|w|^2 = noise_var; var 0 is the identity
inline void add_awgn(CVec& samples, double noise_var, Rng& rng) {
  if (noise_var < 0.0) throw std::invalid_argument("add_awgn: negative variance");
  if (noise_var == 0.0) return;
  for (auto& x : samples) x += rng.next_cgauss(noise_var);
}

struct SampleWindow {
  int start = 0;
  int len = 0;
};

// Per-subcarrier response H[k] for each link.
struct CsiMatrix {
  int n_subcarriers = 0;
  std::array<CVec, 4> h;  // [link][k]

  cplx at(int k, int s, int v) const noexcept { return h[FadingProcess::link_index(s, v)][k]; }

  CsiMatrix scaled(double a) const {
    CsiMatrix out = *this;
    for (auto& link : out.h)
      for (auto& v : link) v *= a;
    return out;
  }
};

namespace detail {

// full circle of unit roots exp(-j 2 pi k / n), cached per length
inline const CVec& dft_roots(int n) {
  thread_local std::unordered_map<int, CVec> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  CVec r(n);
  for (int k = 0; k < n; ++k) {
    const double ang = -2.0 * kPi * double(k) / double(n);
    r[k] = {std::cos(ang), std::sin(ang)};
  }
  return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace detail

inline void extract_csi_into(const FadingProcess& f, std::span<const SampleWindow> windows,
                             int n_subcarriers, CsiMatrix& out) {
  if (windows.empty()) throw std::invalid_argument("extract_csi: no averaging window");
  long total = 0;
  for (const auto& w : windows) {
    if (w.len <= 0 || w.start < 0 || w.start + w.len > f.n_samples)
      throw std::invalid_argument("extract_csi: window outside the fading record");
    total += w.len;
  }

  out.n_subcarriers = n_subcarriers;
  const int n_taps = int(f.pdp.delays.size());
  const CVec& roots = detail::dft_roots(n_subcarriers);

  for (int link = 0; link < 4; ++link) {
    CVec& hk = out.h[link];
    hk.assign(n_subcarriers, cplx(0.0));
    for (int l = 0; l < n_taps; ++l) {
      cplx avg = 0.0;
      if (f.mode == FadingMode::Static) {
        avg = f.gain[link][l][0];
      } else {
        for (const auto& w : windows)
          for (int n = w.start; n < w.start + w.len; ++n) avg += f.tap_gain(link, l, n);
        avg /= double(total);
      }
      // H_k += h_l * exp(-j 2 pi d_l k / N), unnormalized frequency response
      const int d = f.pdp.delays[l] % n_subcarriers;
      int idx = 0;
      for (int k = 0; k < n_subcarriers; ++k) {
        hk[k] += avg * roots[idx];
        idx += d;
        if (idx >= n_subcarriers) idx -= n_subcarriers;
      }
    }
  }
}

inline CsiMatrix extract_csi(const FadingProcess& f, std::span<const SampleWindow> windows,
                             int n_subcarriers) {
  CsiMatrix out;
  extract_csi_into(f, windows, n_subcarriers, out);
  return out;
}

}  // namespace airlink
