// airlink: link-level BER simulator for 2x2 Alamouti OFDM schemes over
// frequency- and time-selective Rayleigh channels.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "airlink/cli.hpp"

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("AIRLINK_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::runtime_error("AIRLINK_SEED is not an unsigned integer");
    }
  }
  return 1;
}

// CSV (always) and optional SVG for one batch of result rows.
void emit(const std::vector<airlink::ResultRow>& rows, const std::string& out_path,
          const std::string& plot_path, const std::string& title) {
  if (out_path.empty()) {
    airlink::write_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    airlink::write_csv(out, rows);
  }
  if (!plot_path.empty()) {
    std::ofstream svg(plot_path, std::ios::binary);
    if (!svg) throw std::runtime_error("cannot open plot file: " + plot_path);
    airlink::write_svg(svg, rows, title);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BER simulator for STBC / SFBC / WHT-SFBC OFDM over Rayleigh channels"};
  app.require_subcommand(1);

  airlink::SweepRequest rq;
  rq.seed = 0;  // placeholder; resolved against AIRLINK_SEED after parsing
  std::string config_path, out_path, plot_path;

  CLI::App* sweep = app.add_subcommand("sweep", "run one scheme over an SNR grid");
  sweep->add_option("--scheme", rq.scheme, "stbc|sfbc|wht-sfbc")->capture_default_str();
  sweep->add_option("--modulation", rq.modulation, "bpsk|qpsk")->capture_default_str();
  sweep->add_option("--channel", rq.channel, "ch1|ch2|ch3|flat")->capture_default_str();
  sweep->add_option("--channel-file", rq.channel_file,
                    "tap profile file (delays=..., gains=...); overrides --channel");
  sweep->add_option("--fd", rq.fd_hz, "Doppler spread in Hz")->capture_default_str();
  sweep->add_option("--fading", rq.fading,
                    "static|block|sample (default: static when fd=0, sample otherwise)");
  sweep->add_option("--snr", rq.snr, "grid as start:step:stop or comma list, in dB")
      ->capture_default_str();
  sweep->add_option("--min-errors", rq.min_errors, "bit errors to stop a point at")
      ->capture_default_str();
  sweep->add_option("--max-bits", rq.max_bits, "bit budget cap per point")
      ->capture_default_str();
  sweep->add_option("--seed", rq.seed, "base RNG seed (default: AIRLINK_SEED or 1)");
  sweep->add_option("--workers", rq.workers, "trial-simulation threads")->capture_default_str();
  sweep->add_option("--out", out_path, "CSV path (default: stdout)");
  sweep->add_option("--plot", plot_path, "also render the curves to this SVG file");
  sweep->add_option("--config", config_path, "key = value file with the flags above; flags win");

  std::string preset_name;
  std::uint64_t preset_seed = 0;
  int preset_workers = 1;
  CLI::App* preset = app.add_subcommand("preset", "run a canned multi-curve scenario");
  preset->add_option("name", preset_name, "fig1|fig2|fig3|fig4|fig5|fig6")->required();
  preset->add_option("--seed", preset_seed, "base RNG seed (default: AIRLINK_SEED or 1)");
  preset->add_option("--workers", preset_workers, "trial-simulation threads")
      ->capture_default_str();
  preset->add_option("--out", out_path, "CSV path (default: stdout)");
  preset->add_option("--plot", plot_path, "also render the curves to this SVG file");

  CLI::App* validate = app.add_subcommand("validate", "run the numerical self-checks");

  std::string ds_channel;
  CLI::App* ds = app.add_subcommand("delay-spread", "print a channel profile's moments");
  ds->add_option("channel", ds_channel, "ch1|ch2|ch3|flat or a profile file path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      bool seed_set = sweep->get_option("--seed")->count() > 0;
      if (!config_path.empty()) {
        // config supplies only the keys the command line left untouched
        for (const auto& [key, value] : airlink::load_config_file(config_path)) {
          const std::string flag = "--" + key;
          if (key == "config" || sweep->get_option_no_throw(flag) == nullptr)
            throw std::runtime_error("config: unknown key '" + key + "'");
          if (sweep->get_option(flag)->count() > 0) continue;  // flag wins
          try {
            if (key == "scheme") rq.scheme = value;
            else if (key == "modulation") rq.modulation = value;
            else if (key == "channel") rq.channel = value;
            else if (key == "channel-file") rq.channel_file = value;
            else if (key == "fd") rq.fd_hz = std::stod(value);
            else if (key == "fading") rq.fading = value;
            else if (key == "snr") rq.snr = value;
            else if (key == "min-errors") rq.min_errors = std::stoll(value);
            else if (key == "max-bits") rq.max_bits = std::stoll(value);
            else if (key == "workers") rq.workers = std::stoi(value);
            else if (key == "out") { if (out_path.empty()) out_path = value; }
            else if (key == "plot") { if (plot_path.empty()) plot_path = value; }
            else if (key == "seed") {
              rq.seed = std::stoull(value);
              seed_set = true;
            }
          } catch (const std::exception&) {
            throw std::runtime_error("config: bad value for '" + key + "': " + value);
          }
        }
      }
      if (!seed_set) rq.seed = default_seed();
      const airlink::Scenario sc = airlink::make_scenario(rq);
      emit(airlink::run_sweep_rows(sc, rq.workers), out_path, plot_path,
           "airlink sweep: " + rq.scheme + " over " + sc.pdp.name);
      return 0;
    }
    if (preset->parsed()) {
      if (preset->get_option("--seed")->count() == 0) preset_seed = default_seed();
      if (preset_name == "fig1") {
        if (out_path.empty()) {
          airlink::write_fig1_csv(std::cout, preset_seed);
        } else {
          std::ofstream out(out_path, std::ios::binary);
          if (!out) throw std::runtime_error("cannot open output file: " + out_path);
          airlink::write_fig1_csv(out, preset_seed);
        }
        return 0;
      }
      emit(airlink::run_preset_rows(preset_name, preset_seed, preset_workers), out_path,
           plot_path, "airlink preset " + preset_name);
      return 0;
    }
    if (validate->parsed()) return airlink::cmd_validate(std::cout);
    if (ds->parsed()) return airlink::cmd_delay_spread(ds_channel, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "airlink: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
