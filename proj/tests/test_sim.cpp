#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "airlink/reference.hpp"
#include "airlink/sim.hpp"

using airlink::FadingMode;
using airlink::Modulation;
using airlink::Scenario;
using airlink::Scheme;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Scenario base_scenario(Scheme s, const char* chan, double fd, FadingMode mode) {
  Scenario sc;
  sc.scheme = s;
  sc.pdp = airlink::make_profile(chan);
  sc.fd_hz = fd;
  sc.mode = mode;
  sc.seed = 9001;
  return sc;
}

long long noiseless_errors(Scenario sc, int n_trials) {
  sc.snr_grid_db = {kInf};
  long long err = 0;
  for (int t = 0; t < n_trials; ++t) err += airlink::run_trial(sc, 0, t).errors;
  return err;
}

}  // namespace

TEST_CASE("closed-form mrc reference against frozen values and brute force") {
  // frozen: L=4 branches at mean branch SNR snr_lin/2
  CHECK(airlink::mrc_bpsk_ber(4, 0.5) == Catch::Approx(4.025812e-2).epsilon(1e-5));
  CHECK(airlink::mrc_bpsk_ber(4, std::pow(10.0, 0.8) / 2.0) ==
        Catch::Approx(5.110302e-4).epsilon(1e-5));
  CHECK(airlink::mrc_bpsk_ber(4, 5.0) == Catch::Approx(1.133584e-4).epsilon(1e-5));
  // single branch reduces to the textbook Rayleigh BPSK expression
  CHECK(airlink::mrc_bpsk_ber(1, 1.0) == Catch::Approx(0.5 * (1.0 - std::sqrt(0.5))).epsilon(1e-12));

  for (double snr_db : {0.0, 4.0}) {
    const double closed = airlink::mrc_bpsk_ber(4, std::pow(10.0, snr_db / 10.0) / 2.0);
    const double numeric = airlink::mrc4_ber_numeric(snr_db, 400000, 1234);
    CHECK(std::abs(numeric - closed) / closed < 0.03);
  }
}

TEST_CASE("link budget constants") {
  auto lb = airlink::LinkBudget::from_snr(10.0);
  CHECK(lb.noise_var == Catch::Approx(0.1).epsilon(1e-12));
  CHECK(lb.sample_dt(64) == Catch::Approx(1.0 / 266880.0).epsilon(1e-12));
  CHECK(lb.doppler_speed_kmh(42.0) == Catch::Approx(18.9).margin(0.05));
  CHECK(lb.doppler_speed_kmh(210.0) == Catch::Approx(94.4).margin(0.2));
  CHECK(airlink::snr_to_noise_var(0.0) == 1.0);
}

TEST_CASE("scenario validation") {
  Scenario sc = base_scenario(Scheme::Sfbc, "ch1", 0.0, FadingMode::Static);
  sc.snr_grid_db = {10.0};
  CHECK_NOTHROW(sc.validate());

  Scenario bad = sc;
  bad.fd_hz = 42.0;  // static mode cannot move
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = sc;
  bad.snr_grid_db.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = sc;
  bad.cp = 2;  // ch1 spills past a 2-sample prefix
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = sc;
  bad.stop.max_bits = 16;  // below one trial
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("transmit energy equals data symbol energy") {
  airlink::Rng rng(3);
  airlink::CVec a(64);
  for (auto& s : a) s = Modulation::qpsk().point(int(rng.next_u64() & 3));
  double ea = 0.0;
  for (const auto& s : a) ea += std::norm(s);

  auto st = airlink::sfbc_encode(a);
  airlink::CVec x1 = airlink::idft(st.b1), x2 = airlink::idft(st.b2);
  double et = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i)
    et += 0.5 * (std::norm(x1[i]) + std::norm(x2[i]));  // 1/sqrt(2) per antenna
  CHECK(std::abs(et - ea) < 1e-9);
}

TEST_CASE("trials are pure functions of their indices") {
  Scenario sc = base_scenario(Scheme::WhtSfbc, "ch2", 105.0, FadingMode::Sample);
  sc.snr_grid_db = {5.0, 15.0};
  auto a = airlink::run_trial(sc, 1, 77);
  auto b = airlink::run_trial(sc, 1, 77);
  CHECK(a.bits == b.bits);
  CHECK(a.errors == b.errors);
  CHECK(a.bits == sc.bits_per_trial());
}

TEST_CASE("noiseless static recovery is exact for stbc and wht-sfbc") {
  for (auto* chan : {"flat", "ch1", "ch2", "ch3"}) {
    CHECK(noiseless_errors(base_scenario(Scheme::Stbc, chan, 0.0, FadingMode::Static), 200) == 0);
    CHECK(noiseless_errors(base_scenario(Scheme::WhtSfbc, chan, 0.0, FadingMode::Static), 200) ==
          0);
  }
}

TEST_CASE("plain sfbc mismatch errors grow with frequency selectivity") {
  // pair-mismatch floors are tiny on mild profiles (measured roughly 5e-8
  // on ch1, 4e-6 on ch2) so only ch3 produces dependable counts here; the
  // ordering across profiles is what matters
  CHECK(noiseless_errors(base_scenario(Scheme::Sfbc, "flat", 0.0, FadingMode::Static), 300) == 0);
  const long long e1 = noiseless_errors(base_scenario(Scheme::Sfbc, "ch1", 0.0, FadingMode::Static), 3000);
  const long long e3 = noiseless_errors(base_scenario(Scheme::Sfbc, "ch3", 0.0, FadingMode::Static), 3000);
  CHECK(e3 > 50);
  CHECK(e1 * 10 < e3);
}

TEST_CASE("qpsk noiseless static recovery") {
  Scenario sc = base_scenario(Scheme::WhtSfbc, "ch3", 0.0, FadingMode::Static);
  sc.mod = Modulation::qpsk();
  CHECK(noiseless_errors(sc, 200) == 0);
  Scenario st = base_scenario(Scheme::Stbc, "ch2", 0.0, FadingMode::Static);
  st.mod = Modulation::qpsk();
  CHECK(noiseless_errors(st, 200) == 0);
}

TEST_CASE("stbc over a flat static channel follows the diversity-4 reference") {
  Scenario sc = base_scenario(Scheme::Stbc, "flat", 0.0, FadingMode::Static);
  sc.snr_grid_db = {4.0, 8.0};
  sc.stop = {1500, 40'000'000};
  auto pts = airlink::run_sweep(sc, 1);
  for (const auto& p : pts) {
    const double want = airlink::mrc_bpsk_ber(4, std::pow(10.0, p.snr_db / 10.0) / 2.0);
    INFO("snr " << p.snr_db << " ber " << p.ber << " want " << want);
    CHECK(std::abs(p.ber - want) / want < 0.10);
  }
}

TEST_CASE("sweep results do not depend on the worker count") {
  Scenario sc = base_scenario(Scheme::WhtSfbc, "ch1", 0.0, FadingMode::Static);
  sc.snr_grid_db = {0.0, 6.0};
  sc.stop = {150, 4'000'000};
  auto one = airlink::run_sweep(sc, 1);
  auto three = airlink::run_sweep(sc, 3);
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].bits == three[i].bits);
    CHECK(one[i].errors == three[i].errors);
    CHECK(one[i].trials == three[i].trials);
  }
}

TEST_CASE("stop rule: error target and bit cap") {
  Scenario sc = base_scenario(Scheme::Sfbc, "ch3", 0.0, FadingMode::Static);
  sc.snr_grid_db = {0.0};
  sc.stop = {500, 100'000'000};
  auto pts = airlink::run_sweep(sc, 1);
  CHECK(pts[0].errors >= 500);
  CHECK(pts[0].errors < 3000);  // batch planner must not overshoot wildly

  sc.stop = {1'000'000'000, 20'000};
  pts = airlink::run_sweep(sc, 1);
  CHECK(pts[0].bits <= 20'000);
  CHECK(pts[0].bits + sc.bits_per_trial() > 20'000);  // ran right up to the cap
}

TEST_CASE("ber decreases with snr and with doppler removed") {
  Scenario sc = base_scenario(Scheme::WhtSfbc, "ch1", 0.0, FadingMode::Static);
  sc.snr_grid_db = {0.0, 10.0};
  sc.stop = {300, 8'000'000};
  auto pts = airlink::run_sweep(sc, 1);
  CHECK(pts[0].ber > 5.0 * pts[1].ber);
}

TEST_CASE("block fading stbc degrades as doppler grows") {
  // the two slots of a block see different channels once fd > 0
  auto run_at = [&](double fd) {
    Scenario sc = base_scenario(Scheme::Stbc, "ch1", fd, FadingMode::Block);
    sc.snr_grid_db = {25.0};
    sc.stop = {200, 4'000'000};
    return airlink::run_sweep(sc, 1)[0].ber;
  };
  const double slow = run_at(42.0);
  const double fast = run_at(210.0);
  CHECK(fast > 2.0 * slow);
}
