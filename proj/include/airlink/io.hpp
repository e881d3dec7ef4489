#pragma once
// Result serialization: the CSV schema the CLI emits, and a dependency-free
// SVG renderer for quick log-scale BER plots. CSV is the primary artifact;
// the SVG is a convenience view of the same rows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace airlink {

struct ResultRow {
  std::string scheme;
  std::string modulation;
  std::string channel;
  double fd_hz = 0.0;
  double snr_db = 0.0;
  long long bits = 0;
  long long errors = 0;
  double ber = 0.0;
  std::uint64_t seed = 0;
};

// snprintf is locale-independent, unlike iostream float output; %.6g keeps
// the files byte-stable across platforms without drowning them in digits.
inline std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline constexpr const char* kCsvHeader = "scheme,modulation,channel,fd_hz,snr_db,bits,errors,ber,seed";

inline void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.modulation << ',' << r.channel << ',' << format_g(r.fd_hz)
        << ',' << format_g(r.snr_db) << ',' << r.bits << ',' << r.errors << ','
        << format_g(r.ber) << ',' << r.seed << '\n';
  }
}

namespace detail {

struct PlotFrame {
  static constexpr double width = 880, height = 540;
  static constexpr double left = 70, right = 660, top = 40, bottom = 490;
  double snr_min = 0, snr_max = 1;
  double log_min = -1, log_max = 0;

  double x(double snr) const {
    return left + (snr - snr_min) / (snr_max - snr_min) * (right - left);
  }
  double y(double ber) const {
    const double l = std::log10(ber);
    return bottom - (l - log_min) / (log_max - log_min) * (bottom - top);
  }
};

inline const char* plot_color(std::size_t i) {
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                                            "#bcbd22", "#e377c2"};
  return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

}  // namespace detail

// Log-y BER curves, one series per (scheme, channel, fd) combination.
// Zero-error points have no finite log BER and are left out of the polyline.
inline void write_svg(std::ostream& out, std::span<const ResultRow> rows,
                      const std::string& title) {
  std::map<std::string, std::vector<const ResultRow*>> series;
  detail::PlotFrame fr;
  bool any = false;
  for (const auto& r : rows) {
    std::string key = r.scheme + ", " + r.channel + ", fd=" + format_g(r.fd_hz) + " Hz";
    series[key].push_back(&r);
    if (!any) {
      fr.snr_min = fr.snr_max = r.snr_db;
      any = true;
    }
    fr.snr_min = std::min(fr.snr_min, r.snr_db);
    fr.snr_max = std::max(fr.snr_max, r.snr_db);
  }
  double ber_lo = 1.0, ber_hi = 0.0;
  for (const auto& r : rows)
    if (r.ber > 0.0) {
      ber_lo = std::min(ber_lo, r.ber);
      ber_hi = std::max(ber_hi, r.ber);
    }
  if (ber_hi <= 0.0) {
    ber_lo = 1e-6;
    ber_hi = 1.0;
  }
  if (fr.snr_max <= fr.snr_min) fr.snr_max = fr.snr_min + 1.0;
  fr.log_min = std::floor(std::log10(ber_lo));
  fr.log_max = std::ceil(std::log10(ber_hi));
  if (fr.log_max <= fr.log_min) fr.log_max = fr.log_min + 1.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fr.width << "\" height=\""
      << fr.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << (fr.left + fr.right) / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << title << "</text>\n";

  // frame and grid
  out << "<rect x=\"" << fr.left << "\" y=\"" << fr.top << "\" width=\"" << fr.right - fr.left
      << "\" height=\"" << fr.bottom - fr.top << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = int(fr.log_min); d <= int(fr.log_max); ++d) {
    const double yy = fr.y(std::pow(10.0, d));
    out << "<line x1=\"" << fr.left << "\" y1=\"" << yy << "\" x2=\"" << fr.right << "\" y2=\""
        << yy << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << fr.left - 8 << "\" y=\"" << yy + 4
        << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  const double snr_step = (fr.snr_max - fr.snr_min) > 12.0 ? 5.0 : 2.0;
  for (double s = std::ceil(fr.snr_min / snr_step) * snr_step; s <= fr.snr_max + 1e-9;
       s += snr_step) {
    const double xx = fr.x(s);
    out << "<line x1=\"" << xx << "\" y1=\"" << fr.top << "\" x2=\"" << xx << "\" y2=\""
        << fr.bottom << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << xx << "\" y=\"" << fr.bottom + 18 << "\" text-anchor=\"middle\">"
        << format_g(s) << "</text>\n";
  }
  out << "<text x=\"" << (fr.left + fr.right) / 2 << "\" y=\"" << fr.bottom + 38
      << "\" text-anchor=\"middle\">SNR (dB)</text>\n";
  out << "<text x=\"18\" y=\"" << (fr.top + fr.bottom) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (fr.top + fr.bottom) / 2
      << ")\">BER</text>\n";

  std::size_t idx = 0;
  for (auto& [label, pts] : series) {
    const char* color = detail::plot_color(idx);
    std::sort(pts.begin(), pts.end(),
              [](const ResultRow* a, const ResultRow* b) { return a->snr_db < b->snr_db; });
    std::string path;
    for (const ResultRow* p : pts) {
      if (p->ber <= 0.0) continue;
      path += path.empty() ? "M" : " L";
      path += format_g(fr.x(p->snr_db)) + " " + format_g(fr.y(p->ber));
      out << "<circle cx=\"" << fr.x(p->snr_db) << "\" cy=\"" << fr.y(p->ber)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    if (!path.empty())
      out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
    const double ly = fr.top + 16 + 18 * double(idx);
    out << "<line x1=\"" << fr.right + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << fr.right + 40 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fr.right + 46 << "\" y=\"" << ly << "\">" << label << "</text>\n";
    ++idx;
  }
  out << "</svg>\n";
}

}  // namespace airlink
