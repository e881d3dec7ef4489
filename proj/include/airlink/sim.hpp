#pragma once
// Monte Carlo BER engine.
//
// One trial = one coding block through the full chain: bits -> symbols ->
// encoder -> IDFT (1/sqrt(2) per antenna, unit total power) -> cyclic
// prefix -> fading + AWGN -> prefix strip -> DFT -> genie CSI -> decoder ->
// bit errors. Every trial is a pure function of (seed, snr_index,
// trial_index), so sweeps are reproducible bit for bit and independent of
// the worker count. Each trial forks bits/fading/noise substreams from its
// trial seed; schemes share fading and noise draws for a given base seed,
// which keeps cross-scheme BER comparisons low-variance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <thread>
#include <vector>

#include "airlink/channel.hpp"
#include "airlink/coding.hpp"
#include "airlink/modem.hpp"
#include "airlink/rng.hpp"
#include "airlink/transform.hpp"

namespace airlink {

enum class Scheme { Stbc, Sfbc, WhtSfbc };

inline const char* scheme_name(Scheme s) noexcept {
  switch (s) {
    case Scheme::Stbc:
      return "stbc";
    case Scheme::Sfbc:
      return "sfbc";
    default:
      return "wht-sfbc";
  }
}

struct StopRule {
  long long min_bit_errors = 200;
  long long max_bits = 20'000'000;
};

// per-receive-antenna average SNR with unit total transmit power
inline double snr_to_noise_var(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

struct LinkBudget {
  double snr_db = 0.0;
  double noise_var = 1.0;
  double subcarrier_hz = 4170.0;
  double carrier_hz = 2.4e9;

  static LinkBudget from_snr(double snr_db, double subcarrier_hz = 4170.0) {
    return {snr_db, snr_to_noise_var(snr_db), subcarrier_hz, 2.4e9};
  }
  double sample_dt(int n_subcarriers) const { return 1.0 / (n_subcarriers * subcarrier_hz); }
  // mobile speed implied by a Doppler spread at this carrier
  double doppler_speed_kmh(double fd_hz) const { return fd_hz * 299792458.0 / carrier_hz * 3.6; }
};

struct Scenario {
  Scheme scheme = Scheme::WhtSfbc;
  Modulation mod = Modulation::bpsk();
  PowerDelayProfile pdp = make_profile("ch1");
  double fd_hz = 0.0;
  FadingMode mode = FadingMode::Sample;
  std::vector<double> snr_grid_db;
  StopRule stop;
  std::uint64_t seed = 1;
  int n = 64;
  int cp = 16;
  double subcarrier_hz = 4170.0;
  double carrier_hz = 2.4e9;

  int slots() const noexcept { return scheme == Scheme::Stbc ? 2 : 1; }
  long long bits_per_trial() const noexcept {
    return (long long)slots() * n * mod.bits_per_symbol();
  }
  double sample_dt() const noexcept { return 1.0 / (double(n) * subcarrier_hz); }

  void validate() const {
    if (!detail::is_pow2(std::size_t(n))) throw std::invalid_argument("scenario: n must be a power of two >= 2");
    if (cp <= 0 || cp > n) throw std::invalid_argument("scenario: bad cyclic prefix length");
    pdp.validate(cp);
    if (fd_hz < 0.0) throw std::invalid_argument("scenario: negative Doppler");
    if (mode == FadingMode::Static && fd_hz != 0.0)
      throw std::invalid_argument("scenario: static fading requires fd = 0");
    if (snr_grid_db.empty()) throw std::invalid_argument("scenario: empty SNR grid");
    if (stop.min_bit_errors <= 0 || stop.max_bits < bits_per_trial())
      throw std::invalid_argument("scenario: stop rule admits no trials");
    if (subcarrier_hz <= 0.0) throw std::invalid_argument("scenario: bad subcarrier spacing");
  }
};

struct TrialCount {
  long long bits = 0;
  long long errors = 0;
};

struct BerPoint {
  double snr_db = 0.0;
  long long bits = 0;
  long long errors = 0;
  double ber = 0.0;
  long long trials = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// substream tags forked from the per-trial seed
inline constexpr std::uint64_t kBitsStream = 1;
inline constexpr std::uint64_t kFadingStream = 2;
inline constexpr std::uint64_t kNoiseStream = 3;

// Per-thread scratch; reusing buffers keeps the hot loop allocation-free.
class Workspace {
 public:
  explicit Workspace(const Scenario& sc) : sc_(sc) {}

  TrialCount run(int snr_index, long long trial_index) {
    const std::uint64_t trial_seed =
        hash_combine(hash_combine(sc_.seed, std::uint64_t(snr_index)), std::uint64_t(trial_index));
    Rng bits_rng(hash_combine(trial_seed, kBitsStream));
    Rng fading_rng(hash_combine(trial_seed, kFadingStream));
    Rng noise_rng(hash_combine(trial_seed, kNoiseStream));

    const double noise_var = snr_to_noise_var(sc_.snr_grid_db.at(snr_index));
    const int n = sc_.n, cp = sc_.cp, nt = n + cp;
    const int slots = sc_.slots();
    const int bps = sc_.mod.bits_per_symbol();

    draw_bits(bits_rng, std::size_t(slots) * n * bps);

    // map and encode into per-slot, per-antenna subcarrier streams
    if (sc_.scheme == Scheme::Stbc) {
      map_block(0, n, a1_);
      map_block(n, n, a2_);
      stream_[0][0] = &a1_;
      stream_[0][1] = &a2_;
      enc1_.resize(n);
      enc2_.resize(n);
      for (int k = 0; k < n; ++k) {
        enc1_[k] = -std::conj(a2_[k]);
        enc2_[k] = std::conj(a1_[k]);
      }
      stream_[1][0] = &enc1_;
      stream_[1][1] = &enc2_;
    } else {
      map_block(0, n, a1_);
      enc1_.resize(n);
      enc2_.resize(n);
      for (int k = 0; k < n; k += 2) {
        enc1_[k] = a1_[k];
        enc1_[k + 1] = -std::conj(a1_[k + 1]);
        enc2_[k] = a1_[k + 1];
        enc2_[k + 1] = std::conj(a1_[k]);
      }
      if (sc_.scheme == Scheme::WhtSfbc) {
        for (int k = 0; k < n; k += 2) {
          const auto d1 = wht2({enc1_[k], enc1_[k + 1]});
          const auto d2 = wht2({enc2_[k], enc2_[k + 1]});
          enc1_[k] = d1[0];
          enc1_[k + 1] = d1[1];
          enc2_[k] = d2[0];
          enc2_[k + 1] = d2[1];
        }
      }
      stream_[0][0] = &enc1_;
      stream_[0][1] = &enc2_;
    }

    for (int t = 0; t < slots; ++t)
      for (int s = 0; s < 2; ++s) make_frame(*stream_[t][s], frame_[t][s]);

    generate_fading_into(sc_.pdp, sc_.fd_hz, slots * nt, sc_.mode, fading_rng, sc_.sample_dt(),
                         nt, fading_);

    for (int t = 0; t < slots; ++t) {
      apply_channel(frame_[t][0], frame_[t][1], fading_, t * nt, rx_[0], rx_[1]);
      for (int v = 0; v < 2; ++v) {
        add_awgn(rx_[v], noise_var, noise_rng);
        freq_.assign(rx_[v].begin() + cp, rx_[v].end());
        dft_inplace(freq_);
        r_[t][v] = freq_;
      }
    }

    // The receiver decodes with the channel state captured when the block
    // began, the estimate a constancy-assuming receiver would hold for the
    // whole transmission. Under static fading this is exact; under Doppler
    // it leaves the model mismatch that erodes each scheme at its own rate.
    windows_.assign(1, {0, 1});
    extract_csi_into(fading_, windows_, n, csi_);
    for (auto& link : csi_.h)
      for (auto& h : link) h *= kInvSqrt2;  // fold the per-antenna amplitude into the CSI

    TrialCount count{(long long)slots * n * bps, 0};
    count.errors = sc_.scheme == Scheme::Stbc ? decode_stbc() : decode_pairs();
    return count;
  }

 private:
  void draw_bits(Rng& rng, std::size_t n_bits) {
    bits_.resize(n_bits);
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < n_bits; ++i) {
      if (i % 64 == 0) w = rng.next_u64();
      bits_[i] = std::uint8_t(w & 1);
      w >>= 1;
    }
  }

  void map_block(int symbol_offset, int n_symbols, CVec& out) {
    out.resize(n_symbols);
    for (int i = 0; i < n_symbols; ++i) out[i] = sc_.mod.point(tx_label(symbol_offset + i));
  }

  int tx_label(int symbol_index) const {
    const int bps = sc_.mod.bits_per_symbol();
    int label = 0;
    for (int b = 0; b < bps; ++b) label = (label << 1) | bits_[symbol_index * bps + b];
    return label;
  }

  void make_frame(const CVec& stream, CVec& frame) {
    const int n = sc_.n, cp = sc_.cp;
    scratch_ = stream;
    idft_inplace(scratch_);
    for (auto& x : scratch_) x *= kInvSqrt2;
    frame.resize(n + cp);
    for (int i = 0; i < cp; ++i) frame[i] = scratch_[n - cp + i];
    for (int i = 0; i < n; ++i) frame[cp + i] = scratch_[i];
  }

  long long symbol_errors_as_bits(int symbol_index, int est_label) const {
    return __builtin_popcount(std::uint32_t(est_label ^ tx_label(symbol_index)));
  }

  long long decode_stbc() {
    const int n = sc_.n, bps = sc_.mod.bits_per_symbol();
    long long errors = 0;
    for (int k = 0; k < n; ++k) {
      const std::array<std::array<cplx, 2>, 2> link = {
          {{csi_.at(k, 0, 0), csi_.at(k, 0, 1)}, {csi_.at(k, 1, 0), csi_.at(k, 1, 1)}}};
      const std::array<cplx, 4> obs = {r_[0][0][k], r_[0][1][k], r_[1][0][k], r_[1][1][k]};
      const auto est = stbc_decode(make_alamouti_stack(link, obs));
      if (!est) {
        errors += 2 * bps;  // both symbols of the subcarrier lost
        continue;
      }
      errors += symbol_errors_as_bits(k, sc_.mod.demap_symbol((*est)[0]));
      errors += symbol_errors_as_bits(n + k, sc_.mod.demap_symbol((*est)[1]));
    }
    return errors;
  }

  long long decode_pairs() {
    const int n = sc_.n, bps = sc_.mod.bits_per_symbol();
    long long errors = 0;
    for (int k = 0; k < n; k += 2) {
      const std::array<cplx, 4> obs = {r_[0][0][k], r_[0][1][k], r_[0][0][k + 1],
                                       r_[0][1][k + 1]};
      if (sc_.scheme == Scheme::Sfbc) {
        const auto est = sfbc_decode(obs, csi_, k);
        if (!est) {
          errors += 2 * bps;
          continue;
        }
        errors += symbol_errors_as_bits(k, sc_.mod.demap_symbol((*est)[0]));
        errors += symbol_errors_as_bits(k + 1, sc_.mod.demap_symbol((*est)[1]));
      } else {
        const auto est = whtsfbc_decode(obs, csi_, k, sc_.mod);
        errors += symbol_errors_as_bits(k, sc_.mod.demap_symbol(est[0]));
        errors += symbol_errors_as_bits(k + 1, sc_.mod.demap_symbol(est[1]));
      }
    }
    return errors;
  }

  const Scenario& sc_;
  BitBlock bits_;
  CVec a1_, a2_, enc1_, enc2_, scratch_, freq_;
  const CVec* stream_[2][2] = {};
  CVec frame_[2][2];
  CVec rx_[2];
  CVec r_[2][2];
  FadingProcess fading_;
  CsiMatrix csi_;
  std::vector<SampleWindow> windows_;
};

// Next batch of trials, a pure function of the accumulated deterministic
// state. Ramps geometrically while no errors have been seen, then targets
// about half of the predicted remaining work so the stop rule is not
// overshot by much (large overshoots would make low-SNR points needlessly
// expensive and over-tight statistically).
inline long long next_batch(long long errors, long long bits, long long trials,
                            const StopRule& stop, long long bits_per_trial) {
  constexpr long long kMinBatch = 32, kMaxBatch = 65536;
  if (trials == 0) return 64;
  if (errors == 0) return std::min(trials * 2, kMaxBatch);
  const double ber = double(errors) / double(bits);
  const double bits_needed = double(stop.min_bit_errors - errors) / ber;
  const long long est_trials = (long long)(bits_needed / double(bits_per_trial)) + 1;
  return std::clamp((est_trials + 1) / 2, kMinBatch, kMaxBatch);
}

}  // namespace detail

// Runs a single trial from scratch. Sweeps use pooled workspaces instead,
// but the counts are identical by construction.
inline TrialCount run_trial(const Scenario& sc, int snr_index, long long trial_index) {
  detail::Workspace ws(sc);
  return ws.run(snr_index, trial_index);
}

inline std::vector<BerPoint> run_sweep(const Scenario& sc, int workers = 1,
                                       const std::function<void(const BerPoint&)>& on_point = {}) {
  sc.validate();
  if (workers <= 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const long long bpt = sc.bits_per_trial();

  std::vector<std::unique_ptr<detail::Workspace>> pool;
  for (int w = 0; w < workers; ++w) pool.push_back(std::make_unique<detail::Workspace>(sc));

  std::vector<BerPoint> out;
  for (int si = 0; si < int(sc.snr_grid_db.size()); ++si) {
    long long bits = 0, errors = 0, trials = 0;
    while (errors < sc.stop.min_bit_errors && bits + bpt <= sc.stop.max_bits) {
      long long batch = detail::next_batch(errors, bits, trials, sc.stop, bpt);
      batch = std::min(batch, (sc.stop.max_bits - bits) / bpt);
      if (batch <= 0) break;

      std::vector<TrialCount> partial(workers);
      const long long per = (batch + workers - 1) / workers;
      auto chunk = [&](int w) {
        const long long lo = trials + w * per;
        const long long hi = std::min(trials + batch, lo + per);
        TrialCount acc;
        for (long long t = lo; t < hi; ++t) {
          const TrialCount c = pool[w]->run(si, t);
          acc.bits += c.bits;
          acc.errors += c.errors;
        }
        partial[w] = acc;
      };
      std::vector<std::thread> threads;
      for (int w = 1; w < workers; ++w) threads.emplace_back(chunk, w);
      chunk(0);
      for (auto& th : threads) th.join();

      for (const auto& p : partial) {
        bits += p.bits;
        errors += p.errors;
      }
      trials += batch;
    }

    BerPoint point;
    point.snr_db = sc.snr_grid_db[si];
    point.bits = bits;
    point.errors = errors;
    point.ber = bits > 0 ? double(errors) / double(bits) : 0.0;
    point.trials = trials;
    point.seed = sc.seed;
    out.push_back(point);
    if (on_point) on_point(point);
  }
  return out;
}

}  // namespace airlink
