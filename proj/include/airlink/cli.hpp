#pragma once
// Command implementations behind the `airlink` executable. Flag wiring
// lives in the tool's main(); everything here takes plain values so the
// test suite can drive commands without spawning processes.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "airlink/channel.hpp"
#include "airlink/io.hpp"
#include "airlink/sim.hpp"
#include "airlink/validate.hpp"

namespace airlink {

inline Scheme parse_scheme(const std::string& s) {
  if (s == "stbc") return Scheme::Stbc;
  if (s == "sfbc") return Scheme::Sfbc;
  if (s == "wht-sfbc") return Scheme::WhtSfbc;
  throw std::invalid_argument("unknown scheme: " + s + " (expected stbc|sfbc|wht-sfbc)");
}

inline Modulation parse_modulation(const std::string& s) {
  if (s == "bpsk") return Modulation::bpsk();
  if (s == "qpsk") return Modulation::qpsk();
  throw std::invalid_argument("unknown modulation: " + s + " (expected bpsk|qpsk)");
}

inline const char* modulation_name(const Modulation& m) {
  return m.kind == ModKind::Bpsk ? "bpsk" : "qpsk";
}

inline FadingMode parse_fading_mode(const std::string& s) {
  if (s == "static") return FadingMode::Static;
  if (s == "block") return FadingMode::Block;
  if (s == "sample") return FadingMode::Sample;
  throw std::invalid_argument("unknown fading mode: " + s + " (expected static|block|sample)");
}

// Accepts either a comma list ("0,5,12.5") or an inclusive range
// "start:step:stop". Values are deduplicated and sorted; a range whose step
// does not land on `stop` simply ends at the last value below it.
inline std::vector<double> parse_snr_spec(const std::string& spec) {
  if (spec.empty()) throw std::invalid_argument("empty SNR spec");
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double a = 0, step = 0, b = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> a >> c1 >> step >> c2 >> b) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
      throw std::invalid_argument("bad SNR range (want start:step:stop): " + spec);
    if (step <= 0.0 || b < a) throw std::invalid_argument("bad SNR range bounds: " + spec);
    for (int i = 0;; ++i) {
      const double v = a + double(i) * step;
      if (v > b + 1e-9) break;
      out.push_back(v);
    }
  } else {
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.find_first_not_of(" \t") == std::string::npos)
        throw std::invalid_argument("empty SNR list entry: " + spec);
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      while (used < tok.size() && std::isspace((unsigned char)tok[used])) ++used;
      if (used != tok.size()) throw std::invalid_argument("bad SNR value: " + tok);
      out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty SNR list");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) < 1e-9; }),
            out.end());
  return out;
}

// `key = value` lines, '#' starts a comment. Keys mirror the long flags.
inline std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": missing '='");
    const std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key or value");
    kv[key] = value;
  }
  return kv;
}

inline std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

struct SweepRequest {
  std::string scheme = "wht-sfbc";
  std::string modulation = "bpsk";
  std::string channel = "ch1";
  std::string channel_file;         // overrides `channel` when set
  double fd_hz = 0.0;
  std::string fading = "auto";      // static|block|sample; auto picks by fd
  std::string snr = "0:5:30";
  long long min_errors = 200;
  long long max_bits = 20'000'000;
  std::uint64_t seed = 1;
  int workers = 1;
};

inline Scenario make_scenario(const SweepRequest& rq) {
  Scenario sc;
  sc.scheme = parse_scheme(rq.scheme);
  sc.mod = parse_modulation(rq.modulation);
  sc.pdp = rq.channel_file.empty() ? make_profile(rq.channel)
                                   : load_profile_file(rq.channel_file);
  sc.fd_hz = rq.fd_hz;
  sc.mode = rq.fading == "auto"
                ? (rq.fd_hz == 0.0 ? FadingMode::Static : FadingMode::Sample)
                : parse_fading_mode(rq.fading);
  sc.snr_grid_db = parse_snr_spec(rq.snr);
  sc.stop = {rq.min_errors, rq.max_bits};
  sc.seed = rq.seed;
  sc.validate();
  return sc;
}

inline std::vector<ResultRow> run_sweep_rows(const Scenario& sc, int workers) {
  std::vector<ResultRow> rows;
  run_sweep(sc, workers, [&](const BerPoint& p) {
    rows.push_back({scheme_name(sc.scheme), modulation_name(sc.mod), sc.pdp.name, sc.fd_hz,
                    p.snr_db, p.bits, p.errors, p.ber, sc.seed});
  });
  return rows;
}

struct PresetPart {
  const char* scheme;
  const char* modulation;
  const char* channel;
  double fd_hz;
};

// Scheme/channel/Doppler combinations shown in each figure preset.
inline std::vector<PresetPart> preset_parts(const std::string& name) {
  std::vector<PresetPart> parts;
  auto add_schemes = [&](std::initializer_list<const char*> schemes, const char* mod,
                         const char* ch, double fd) {
    for (const char* s : schemes) parts.push_back({s, mod, ch, fd});
  };
  if (name == "fig2") {
    for (const char* ch : {"ch1", "ch2", "ch3"})
      add_schemes({"sfbc", "wht-sfbc"}, "bpsk", ch, 0.0);
  } else if (name == "fig3") {
    for (double fd : {0.0, 42.0, 105.0, 210.0})
      add_schemes({"stbc", "sfbc", "wht-sfbc"}, "bpsk", "ch1", fd);
  } else if (name == "fig4") {
    for (double fd : {0.0, 42.0})
      add_schemes({"stbc", "sfbc", "wht-sfbc"}, "bpsk", "ch3", fd);
  } else if (name == "fig5") {
    for (double fd : {105.0, 210.0})
      add_schemes({"stbc", "sfbc", "wht-sfbc"}, "bpsk", "ch3", fd);
  } else if (name == "fig6") {
    for (const char* ch : {"ch1", "ch2", "ch3"})
      add_schemes({"sfbc", "wht-sfbc"}, "qpsk", ch, 0.0);
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return parts;
}

inline std::vector<ResultRow> run_preset_rows(const std::string& name, std::uint64_t seed,
                                              int workers) {
  std::vector<ResultRow> rows;
  for (const PresetPart& part : preset_parts(name)) {
    SweepRequest rq;
    rq.scheme = part.scheme;
    rq.modulation = part.modulation;
    rq.channel = part.channel;
    rq.fd_hz = part.fd_hz;
    rq.seed = seed;
    const Scenario sc = make_scenario(rq);
    for (ResultRow& r : run_sweep_rows(sc, workers)) rows.push_back(std::move(r));
  }
  return rows;
}

// One static channel realization, the per-subcarrier view a conventional
// receiver sees next to the pairwise-constant response the transformed
// system sees. The pairwise response uses the equal-symbol pattern, whose
// survivor rides the odd subcarrier of each pair.
inline void write_fig1_csv(std::ostream& out, std::uint64_t seed) {
  const int n = 64;
  Rng rng(hash_combine(seed, detail::kFadingStream));
  const FadingProcess f = generate_fading(make_profile("ch1"), 0.0, 1, FadingMode::Static, rng);
  const std::array<SampleWindow, 1> win = {{{0, 1}}};
  const CsiMatrix csi = extract_csi(f, win, n);
  out << "subcarrier,conventional_mag,conventional_phase_rad,wht_effective_mag,"
         "wht_effective_phase_rad\n";
  for (int k = 0; k < n; ++k) {
    const cplx conv = csi.at(k, 0, 0);
    const cplx eff = csi.at(k | 1, 0, 0);
    out << k << ',' << format_g(std::abs(conv)) << ',' << format_g(std::arg(conv)) << ','
        << format_g(std::abs(eff)) << ',' << format_g(std::arg(eff)) << '\n';
  }
}

inline int cmd_validate(std::ostream& out) {
  bool all_pass = true;
  for (const CheckResult& c : run_validation()) {
    all_pass = all_pass && c.pass;
    char head[96];
    std::snprintf(head, sizeof(head), "%-28s %s  measured %.3e  limit %.3e", c.name.c_str(),
                  c.pass ? "PASS" : "FAIL", c.measured, c.limit);
    out << head << "\n    " << c.detail << '\n';
  }
  out << (all_pass ? "validate: all checks passed" : "validate: FAILURES ABOVE") << '\n';
  return all_pass ? 0 : 1;
}

inline int cmd_delay_spread(const std::string& channel, std::ostream& out) {
  const PowerDelayProfile pdp =
      channel.find_first_of("/\\.") != std::string::npos ? load_profile_file(channel)
                                                         : make_profile(channel);
  double mean = 0.0;
  for (std::size_t i = 0; i < pdp.delays.size(); ++i) mean += pdp.delays[i] * pdp.gains[i];
  out << "channel: " << pdp.name << '\n';
  out << "taps: " << pdp.delays.size() << '\n';
  out << "mean delay (samples): " << format_g(mean) << '\n';
  out << "delay spread (samples^2): " << format_g(delay_spread(pdp)) << '\n';
  return 0;
}

}  // namespace airlink
