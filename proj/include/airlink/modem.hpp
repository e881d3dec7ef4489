#pragma once
// Bit <-> symbol mapping. BPSK and Gray-mapped QPSK, both unit energy.
//
// QPSK label layout: bit0 (MSB) selects the real sign, bit1 the imaginary
// sign, 0 -> positive. Adjacent constellation points differ in one bit.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "airlink/transform.hpp"  // cplx, CVec, kInvSqrt2

namespace airlink {

using BitBlock = std::vector<std::uint8_t>;

enum class ModKind { Bpsk, Qpsk };

struct Modulation {
  ModKind kind = ModKind::Bpsk;

  static Modulation bpsk() { return {ModKind::Bpsk}; }
  static Modulation qpsk() { return {ModKind::Qpsk}; }

  int bits_per_symbol() const noexcept { return kind == ModKind::Bpsk ? 1 : 2; }
  int order() const noexcept { return 1 << bits_per_symbol(); }

  cplx point(int label) const {
    if (label < 0 || label >= order()) throw std::invalid_argument("modulation: bad label");
    if (kind == ModKind::Bpsk) return label == 0 ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
    const double re = (label & 2) ? -kInvSqrt2 : kInvSqrt2;
    const double im = (label & 1) ? -kInvSqrt2 : kInvSqrt2;
    return {re, im};
  }

  // nearest constellation point; exact boundary ties resolve to the
  // smaller label (sign tests treat 0.0 as positive)
  int demap_symbol(cplx y) const noexcept {
    if (kind == ModKind::Bpsk) return y.real() < 0.0 ? 1 : 0;
    return ((y.real() < 0.0) ? 2 : 0) | ((y.imag() < 0.0) ? 1 : 0);
  }
};

inline CVec map_bits(const BitBlock& bits, Modulation m) {
  const int bps = m.bits_per_symbol();
  if (bits.size() % bps != 0)
    throw std::invalid_argument("map_bits: bit count not divisible by bits per symbol");
  CVec out(bits.size() / bps);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int label = 0;
    for (int b = 0; b < bps; ++b) label = (label << 1) | (bits[i * bps + b] & 1);
    out[i] = m.point(label);
  }
  return out;
}

inline BitBlock demap_hard(const CVec& symbols, Modulation m) {
  const int bps = m.bits_per_symbol();
  BitBlock out(symbols.size() * bps);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const int label = m.demap_symbol(symbols[i]);
    for (int b = 0; b < bps; ++b) out[i * bps + b] = std::uint8_t((label >> (bps - 1 - b)) & 1);
  }
  return out;
}

}  // namespace airlink
