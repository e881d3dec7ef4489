#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "airlink/cli.hpp"
#include "airlink/io.hpp"

using airlink::FadingMode;
using airlink::Modulation;
using airlink::ResultRow;
using airlink::Scheme;
using airlink::SweepRequest;

TEST_CASE("snr spec ranges are inclusive and stop below a missed endpoint") {
  CHECK(airlink::parse_snr_spec("0:5:30") ==
        std::vector<double>{0, 5, 10, 15, 20, 25, 30});
  CHECK(airlink::parse_snr_spec("0:2:7") == std::vector<double>{0, 2, 4, 6});
  CHECK(airlink::parse_snr_spec("10:10:10") == std::vector<double>{10});
  CHECK(airlink::parse_snr_spec("-6:3:0") == std::vector<double>{-6, -3, 0});
}

TEST_CASE("snr spec lists are sorted and deduplicated") {
  CHECK(airlink::parse_snr_spec("5,1,3") == std::vector<double>{1, 3, 5});
  CHECK(airlink::parse_snr_spec("2,2.0,3") == std::vector<double>{2, 3});
  CHECK(airlink::parse_snr_spec("12.5") == std::vector<double>{12.5});
  CHECK(airlink::parse_snr_spec(" 4 , 2 ") == std::vector<double>{2, 4});
}

TEST_CASE("snr spec rejects malformed input") {
  CHECK_THROWS_AS(airlink::parse_snr_spec(""), std::invalid_argument);
  CHECK_THROWS_AS(airlink::parse_snr_spec("abc"), std::invalid_argument);
  CHECK_THROWS_AS(airlink::parse_snr_spec("1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(airlink::parse_snr_spec("1,2x"), std::invalid_argument);
  CHECK_THROWS_AS(airlink::parse_snr_spec("0:0:10"), std::invalid_argument);
  CHECK_THROWS_AS(airlink::parse_snr_spec("5:1:0"), std::invalid_argument);
  CHECK_THROWS_AS(airlink::parse_snr_spec("0:5"), std::invalid_argument);
  CHECK_THROWS_AS(airlink::parse_snr_spec("0:5:30:2"), std::invalid_argument);
}

TEST_CASE("config parser handles comments, blanks, and whitespace") {
  std::istringstream in(
      "# run profile\n"
      "scheme = sfbc   # trailing comment\n"
      "\n"
      "  snr=0:5:20\n"
      "seed = 9\n"
      "seed = 11\n");
  const auto kv = airlink::parse_config(in);
  CHECK(kv.size() == 3);
  CHECK(kv.at("scheme") == "sfbc");
  CHECK(kv.at("snr") == "0:5:20");
  CHECK(kv.at("seed") == "11");  // later assignment wins
}

TEST_CASE("config parser rejects malformed lines") {
  std::istringstream no_eq("scheme sfbc\n");
  CHECK_THROWS_AS(airlink::parse_config(no_eq), std::invalid_argument);
  std::istringstream no_key(" = sfbc\n");
  CHECK_THROWS_AS(airlink::parse_config(no_key), std::invalid_argument);
  std::istringstream no_value("scheme =   # gone\n");
  CHECK_THROWS_AS(airlink::parse_config(no_value), std::invalid_argument);
}

TEST_CASE("result rows serialize with a fixed header and locale-free numbers") {
  const std::vector<ResultRow> rows = {
      {"stbc", "bpsk", "ch1", 105.0, 12.5, 2000000, 31, 1.55e-05, 7},
      {"wht-sfbc", "qpsk", "ch3", 0.0, 0.0, 4096, 0, 0.0, 1},
  };
  std::ostringstream out;
  airlink::write_csv(out, rows);
  CHECK(out.str() ==
        "scheme,modulation,channel,fd_hz,snr_db,bits,errors,ber,seed\n"
        "stbc,bpsk,ch1,105,12.5,2000000,31,1.55e-05,7\n"
        "wht-sfbc,qpsk,ch3,0,0,4096,0,0,1\n");
}

TEST_CASE("scenario assembly applies the auto fading rule") {
  SweepRequest rq;
  rq.snr = "0,10";
  rq.max_bits = 1 << 20;

  auto sc = airlink::make_scenario(rq);
  CHECK(sc.mode == FadingMode::Static);  // fd = 0 needs no Doppler model
  CHECK(sc.scheme == Scheme::WhtSfbc);
  CHECK(sc.snr_grid_db == std::vector<double>{0, 10});

  rq.fd_hz = 105.0;
  CHECK(airlink::make_scenario(rq).mode == FadingMode::Sample);

  rq.fading = "block";
  CHECK(airlink::make_scenario(rq).mode == FadingMode::Block);

  rq.fading = "static";
  rq.fd_hz = 0.0;  // static mode rejects a Doppler spread
  rq.channel = "ch2";
  sc = airlink::make_scenario(rq);
  CHECK(sc.mode == FadingMode::Static);
  CHECK(sc.pdp.delays == std::vector<int>{0, 1, 2, 6, 11});

  rq.scheme = "alamouti";
  CHECK_THROWS_AS(airlink::make_scenario(rq), std::invalid_argument);
}

TEST_CASE("presets enumerate the advertised scheme and channel combinations") {
  const auto fig2 = airlink::preset_parts("fig2");
  REQUIRE(fig2.size() == 6);
  for (const auto& p : fig2) {
    CHECK(p.fd_hz == 0.0);
    CHECK(std::string(p.modulation) == "bpsk");
    CHECK(std::string(p.scheme) != "stbc");
  }

  CHECK(airlink::preset_parts("fig3").size() == 12);  // 3 schemes x 4 Dopplers
  CHECK(airlink::preset_parts("fig4").size() == 6);
  CHECK(airlink::preset_parts("fig5").size() == 6);

  const auto fig5 = airlink::preset_parts("fig5");
  for (const auto& p : fig5) {
    CHECK(std::string(p.channel) == "ch3");
    CHECK(p.fd_hz >= 105.0);
  }

  const auto fig6 = airlink::preset_parts("fig6");
  for (const auto& p : fig6) CHECK(std::string(p.modulation) == "qpsk");

  CHECK_THROWS_AS(airlink::preset_parts("fig7"), std::invalid_argument);
}

TEST_CASE("channel snapshot pairs subcarriers under the transform") {
  std::ostringstream out;
  airlink::write_fig1_csv(out, 7);

  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line ==
        "subcarrier,conventional_mag,conventional_phase_rad,"
        "wht_effective_mag,wht_effective_phase_rad");

  int rows = 0;
  std::vector<std::vector<double>> cols(5);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    for (auto& c : cols) {
      REQUIRE(std::getline(ls, tok, ','));
      c.push_back(std::stod(tok));
    }
    ++rows;
  }
  REQUIRE(rows == 64);

  for (int k = 0; k < 64; k += 2) {
    // both subcarriers of a pair ride the same effective coefficient
    CHECK(cols[3][k] == Catch::Approx(cols[3][k + 1]).margin(1e-12));
    CHECK(cols[4][k] == Catch::Approx(cols[4][k + 1]).margin(1e-12));
  }

  // same seed, same snapshot
  std::ostringstream again;
  airlink::write_fig1_csv(again, 7);
  CHECK(out.str() == again.str());
  std::ostringstream other;
  airlink::write_fig1_csv(other, 8);
  CHECK(out.str() != other.str());
}

TEST_CASE("delay spread report names the profile and its second moment") {
  std::ostringstream out;
  const int rc = airlink::cmd_delay_spread("ch2", out);
  CHECK(rc == 0);
  const std::string text = out.str();
  CHECK(text.find("ch2") != std::string::npos);
  CHECK(text.find("6.6144") != std::string::npos);

  std::ostringstream flat;
  airlink::cmd_delay_spread("flat", flat);
  CHECK(flat.str().find("delay spread") != std::string::npos);
}

TEST_CASE("validation command reports every check and exits clean") {
  std::ostringstream out;
  const int rc = airlink::cmd_validate(out);
  CHECK(rc == 0);
  const auto n_pass = [&] {
    std::size_t count = 0, at = 0;
    while ((at = out.str().find("PASS", at)) != std::string::npos) ++count, ++at;
    return count;
  }();
  CHECK(n_pass == 8);
  CHECK(out.str().find("FAIL") == std::string::npos);
}
