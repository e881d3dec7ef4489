#pragma once
// Alamouti-family encoders and decoders.
//
//   stbc:     2x2 Alamouti across two OFDM symbols (time slots)
//   sfbc:     Alamouti across adjacent subcarriers of one symbol
//   whtsfbc:  SFBC followed by a per-antenna 2-point WHT over each pair;
//             with BPSK exactly one entry of each transformed pair is zero,
//             so each subcarrier in a pair carries only one antenna and the
//             pair-wise channel mismatch the plain SFBC decoder suffers from
//             disappears
//
// Pair observation ordering used by the decoders, for even k:
//   r_pair = { r_k(rx1), r_k(rx2), r_{k+1}(rx1), r_{k+1}(rx2) }

#include <array>
#include <optional>
#include <stdexcept>

#include "airlink/channel.hpp"
#include "airlink/modem.hpp"
#include "airlink/transform.hpp"

namespace airlink {

// u[s][tau]: antenna s, slot tau
struct StbcGrid {
  std::array<std::array<CVec, 2>, 2> u;
};

inline StbcGrid stbc_encode(const CVec& a1, const CVec& a2) {
  if (a1.size() != a2.size() || a1.empty())
    throw std::invalid_argument("stbc_encode: blocks must be non-empty and equal length");
  StbcGrid g;
  g.u[0][0] = a1;
  g.u[1][0] = a2;
  g.u[0][1].resize(a1.size());
  g.u[1][1].resize(a1.size());
  for (std::size_t k = 0; k < a1.size(); ++k) {
    g.u[0][1][k] = -std::conj(a2[k]);
    g.u[1][1][k] = std::conj(a1[k]);
  }
  return g;
}

struct SfbcStreams {
  CVec b1, b2;
};

// pairs (a_k, a_{k+1}) -> antenna1 [a_k, -conj(a_{k+1})], antenna2 [a_{k+1}, conj(a_k)]
inline SfbcStreams sfbc_encode(const CVec& a) {
  if (a.empty() || a.size() % 2 != 0)
    throw std::invalid_argument("sfbc_encode: block length must be even");
  SfbcStreams s;
  s.b1.resize(a.size());
  s.b2.resize(a.size());
  for (std::size_t k = 0; k < a.size(); k += 2) {
    s.b1[k] = a[k];
    s.b1[k + 1] = -std::conj(a[k + 1]);
    s.b2[k] = a[k + 1];
    s.b2[k + 1] = std::conj(a[k]);
  }
  return s;
}

struct WhtStreams {
  CVec d1, d2;
};

// the SFBC pair of each antenna passed through the 2-point WHT
inline WhtStreams whtsfbc_encode(const CVec& a) {
  SfbcStreams s = sfbc_encode(a);
  WhtStreams w;
  w.d1.resize(a.size());
  w.d2.resize(a.size());
  for (std::size_t k = 0; k < a.size(); k += 2) {
    const auto d1 = wht2({s.b1[k], s.b1[k + 1]});
    const auto d2 = wht2({s.b2[k], s.b2[k + 1]});
    w.d1[k] = d1[0];
    w.d1[k + 1] = d1[1];
    w.d2[k] = d2[0];
    w.d2[k + 1] = d2[1];
  }
  return w;
}

// Stacked 4x2 Alamouti system. Rows 1-2 are the direct observations, rows
// 3-4 the conjugated second observations, so with a common channel the
// columns are orthogonal and H^H H = (sum |h|^2) I.
struct AlamoutiStack {
  std::array<std::array<cplx, 2>, 4> h;
  std::array<cplx, 4> r;
};

// link[s][v]: channel gain tx s -> rx v assumed common to both uses;
// obs = { first use rx1, first use rx2, second use rx1, second use rx2 }
inline AlamoutiStack make_alamouti_stack(const std::array<std::array<cplx, 2>, 2>& link,
                                         const std::array<cplx, 4>& obs) {
  AlamoutiStack st;
  for (int v = 0; v < 2; ++v) {
    st.h[v] = {link[0][v], link[1][v]};
    st.h[2 + v] = {std::conj(link[1][v]), -std::conj(link[0][v])};
    st.r[v] = obs[v];
    st.r[2 + v] = std::conj(obs[2 + v]);
  }
  return st;
}

// zero-forcing solve (H^H H)^{-1} H^H r; nullopt when H^H H is numerically
// singular (condition number above 1e12)
inline std::optional<std::array<cplx, 2>> stbc_decode(const AlamoutiStack& st) {
  double m00 = 0.0, m11 = 0.0;
  cplx m01 = 0.0;
  cplx z0 = 0.0, z1 = 0.0;
  for (int i = 0; i < 4; ++i) {
    m00 += std::norm(st.h[i][0]);
    m11 += std::norm(st.h[i][1]);
    m01 += std::conj(st.h[i][0]) * st.h[i][1];
    z0 += std::conj(st.h[i][0]) * st.r[i];
    z1 += std::conj(st.h[i][1]) * st.r[i];
  }
  const double tr = m00 + m11;
  const double det = m00 * m11 - std::norm(m01);
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  const double lmax = 0.5 * (tr + disc);
  const double lmin = 0.5 * (tr - disc);
  if (!(lmin > lmax * 1e-12)) return std::nullopt;

  return std::array<cplx, 2>{(m11 * z0 - m01 * z1) / det,
                             (m00 * z1 - std::conj(m01) * z0) / det};
}

// Plain SFBC pair decoder. Deliberately substitutes the subcarrier-k CSI for
// both halves of the pair; on frequency-selective channels the resulting
// model mismatch is what produces the scheme's error floor.
inline std::optional<std::array<cplx, 2>> sfbc_decode(const std::array<cplx, 4>& r_pair,
                                                      const CsiMatrix& csi, int k) {
  if (k < 0 || k + 1 >= csi.n_subcarriers || (k % 2) != 0)
    throw std::invalid_argument("sfbc_decode: k must be an even subcarrier index");
  const std::array<std::array<cplx, 2>, 2> link = {{{csi.at(k, 0, 0), csi.at(k, 0, 1)},
                                                    {csi.at(k, 1, 0), csi.at(k, 1, 1)}}};
  return stbc_decode(make_alamouti_stack(link, r_pair));
}

// WHT-SFBC pair detector: undo the WHT on each receive antenna, then pick
// the symbol pair whose regenerated noiseless observation (built with the
// exact per-subcarrier CSI) is closest. Ties keep the lowest candidate
// index i * M + j.
inline std::array<cplx, 2> whtsfbc_decode(const std::array<cplx, 4>& r_pair,
                                          const CsiMatrix& csi, int k, Modulation m) {
  if (k < 0 || k + 1 >= csi.n_subcarriers || (k % 2) != 0)
    throw std::invalid_argument("whtsfbc_decode: k must be an even subcarrier index");

  const std::array<cplx, 2> w1 = wht2({r_pair[0], r_pair[2]});
  const std::array<cplx, 2> w2 = wht2({r_pair[1], r_pair[3]});

  const int order = m.order();
  double best = 0.0;
  int best_i = -1, best_j = -1;
  for (int i = 0; i < order; ++i) {
    const cplx ak = m.point(i);
    for (int j = 0; j < order; ++j) {
      const cplx ak1 = m.point(j);
      const auto d1 = wht2({ak, -std::conj(ak1)});
      const auto d2 = wht2({ak1, std::conj(ak)});
      double dist = 0.0;
      for (int v = 0; v < 2; ++v) {
        const cplx yk = csi.at(k, 0, v) * d1[0] + csi.at(k, 1, v) * d2[0];
        const cplx yk1 = csi.at(k + 1, 0, v) * d1[1] + csi.at(k + 1, 1, v) * d2[1];
        const auto wm = wht2({yk, yk1});
        const std::array<cplx, 2>& w = v == 0 ? w1 : w2;
        dist += std::norm(w[0] - wm[0]) + std::norm(w[1] - wm[1]);
      }
      if (best_i < 0 || dist < best) {
        best = dist;
        best_i = i;
        best_j = j;
      }
    }
  }
  return {m.point(best_i), m.point(best_j)};
}

}  // namespace airlink
