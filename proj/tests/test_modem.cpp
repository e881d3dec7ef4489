#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "airlink/modem.hpp"
#include "airlink/rng.hpp"

using airlink::BitBlock;
using airlink::cplx;
using airlink::CVec;
using airlink::Modulation;

namespace {

// reference demapper: scan all points, strict < keeps the smaller label on ties
int nearest_label(cplx y, Modulation m) {
  int best = 0;
  double dbest = std::norm(y - m.point(0));
  for (int l = 1; l < m.order(); ++l) {
    const double d = std::norm(y - m.point(l));
    if (d < dbest) {
      dbest = d;
      best = l;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("bpsk mapping") {
  Modulation m = Modulation::bpsk();
  BitBlock bits = {0, 1, 1, 0};
  CVec s = map_bits(bits, m);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == cplx(1.0, 0.0));
  CHECK(s[1] == cplx(-1.0, 0.0));
  CHECK(s[2] == cplx(-1.0, 0.0));
  CHECK(s[3] == cplx(1.0, 0.0));
  CHECK(demap_hard(s, m) == bits);
}

TEST_CASE("qpsk mapping is Gray and unit energy") {
  Modulation m = Modulation::qpsk();
  const double r = 1.0 / std::sqrt(2.0);

  BitBlock bits = {0, 0, 0, 1, 1, 0, 1, 1};
  CVec s = map_bits(bits, m);
  REQUIRE(s.size() == 4);
  CHECK(std::abs(s[0] - cplx(r, r)) < 1e-15);
  CHECK(std::abs(s[1] - cplx(r, -r)) < 1e-15);
  CHECK(std::abs(s[2] - cplx(-r, r)) < 1e-15);
  CHECK(std::abs(s[3] - cplx(-r, -r)) < 1e-15);
  CHECK(demap_hard(s, m) == bits);

  for (int l = 0; l < 4; ++l) CHECK(std::abs(std::norm(m.point(l)) - 1.0) < 1e-15);

  // Gray property: horizontally/vertically adjacent points differ in one bit
  auto hamming = [](int a, int b) { return __builtin_popcount(a ^ b); };
  CHECK(hamming(0, 1) == 1);  // (+,+) vs (+,-)
  CHECK(hamming(0, 2) == 1);  // (+,+) vs (-,+)
  CHECK(hamming(3, 1) == 1);
  CHECK(hamming(3, 2) == 1);
}

TEST_CASE("hard demapper equals nearest point search") {
  airlink::Rng rng(5);
  for (Modulation m : {Modulation::bpsk(), Modulation::qpsk()}) {
    for (int i = 0; i < 2000; ++i) {
      cplx y = rng.next_cgauss(4.0);
      CHECK(m.demap_symbol(y) == nearest_label(y, m));
    }
  }
}

TEST_CASE("demapper boundary ties pick the smaller label") {
  Modulation b = Modulation::bpsk();
  CHECK(b.demap_symbol(cplx(0.0, 0.3)) == 0);
  Modulation q = Modulation::qpsk();
  CHECK(q.demap_symbol(cplx(0.0, 0.0)) == 0);
  CHECK(q.demap_symbol(cplx(0.0, -1.0)) == 1);
  CHECK(q.demap_symbol(cplx(-1.0, 0.0)) == 2);
}

TEST_CASE("map_bits validates length") {
  BitBlock odd = {1, 0, 1};
  CHECK_THROWS_AS(map_bits(odd, Modulation::qpsk()), std::invalid_argument);
  CHECK_NOTHROW(map_bits(odd, Modulation::bpsk()));
}

TEST_CASE("map/demap round trip on random bits") {
  airlink::Rng rng(9);
  for (Modulation m : {Modulation::bpsk(), Modulation::qpsk()}) {
    BitBlock bits(512);
    for (auto& bit : bits) bit = std::uint8_t(rng.next_u64() & 1);
    CHECK(demap_hard(map_bits(bits, m), m) == bits);
  }
}
