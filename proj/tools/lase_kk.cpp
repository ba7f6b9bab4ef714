#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lasekk/cli_io/commands.hpp"
#include "lasekk/cli_io/config.hpp"

namespace {

using lasekk::cli::Command;

struct SubcommandState {
  Command command;
  CLI::App* app;
  std::map<std::string, std::string> values;  // key -> raw text from flags
  std::vector<std::pair<CLI::Option*, std::string>> options;
  std::string config_path;
  std::string write_config;
  std::string out;
  bool svg = false;
  bool oracles = false;
};

void add_value(SubcommandState& st, const std::string& flag, const std::string& key,
               const std::string& help) {
  st.options.emplace_back(st.app->add_option(flag, st.values[key], help), key);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gain-clamped laser and pump-probe susceptibility spectra with Kramers-Kronig checks"};
  app.require_subcommand(1);

  const std::pair<Command, const char*> commands[] = {
      {Command::LaserProfile, "Clamped gain, dispersion and intensity of a lasing ring cavity"},
      {Command::ProbeSpectrum, "Weak-probe susceptibility of a pumped, driven two-level medium"},
      {Command::KKCheck, "Kramers-Kronig consistency of a sampled spectrum"},
      {Command::OracleCompare, "Closed form vs linear solve vs time-domain probe susceptibility"},
  };
  std::vector<std::unique_ptr<SubcommandState>> states;
  for (const auto& [cmd, help] : commands) {
    auto st = std::make_unique<SubcommandState>();
    st->command = cmd;
    st->app = app.add_subcommand(lasekk::cli::command_name(cmd), help);
    auto& s = *st;
    s.app->add_option("--config", s.config_path, "Read settings from a key = value file first");
    s.app->add_option("--write-config", s.write_config, "Write the merged effective settings here");
    s.app->add_option("--out", s.out, "Output CSV path");
    add_value(s, "--preset", "preset", "fig1, fig4a, fig4b, fig4c or fig4d");
    add_value(s, "--grid-min", "grid_min", "Lowest detuning, rad/s");
    add_value(s, "--grid-max", "grid_max", "Highest detuning, rad/s");
    add_value(s, "--grid-n", "grid_n", "Number of grid points");
    add_value(s, "--seed", "seed", "Random seed");
    add_value(s, "--gamma", "gamma", "Medium/longitudinal decay rate Gamma, rad/s");
    if (cmd == Command::LaserProfile || cmd == Command::KKCheck) {
      add_value(s, "--q", "q", "Cavity quality factor");
      add_value(s, "--gq", "gq", "Gain-loss product Q G");
      add_value(s, "--nu0", "nu0", "Line center, rad/s");
    }
    if (cmd != Command::LaserProfile) {
      add_value(s, "--gamma-ba", "gamma_ba", "Transverse decay rate, rad/s");
      add_value(s, "--r-op", "r_op", "Incoherent pump rate, rad/s");
      add_value(s, "--delta-pump", "delta_pump", "Pump detuning, rad/s");
      add_value(s, "--omega1", "omega1", "Pump Rabi frequency, rad/s");
      add_value(s, "--gain-g", "gain_g", "Gain prefactor G");
    }
    if (cmd != Command::OracleCompare) s.app->add_flag("--svg", s.svg, "Also write an SVG rendering");
    if (cmd == Command::ProbeSpectrum)
      s.app->add_flag("--oracles", s.oracles, "Add linear-solve columns and their deviation");
    if (cmd == Command::KKCheck) {
      add_value(s, "--input", "input", "Spectrum CSV to check instead of a preset");
      add_value(s, "--kk-window", "kk_window", "Window half-width in units of eta (probe) or Gamma (laser)");
      add_value(s, "--tail-chi-prime", "tail_chi_prime", "Decay exponent of chi' beyond the window (0 = none)");
      add_value(s, "--tail-chi-double-prime", "tail_chi_double_prime",
                "Decay exponent of chi'' beyond the window (0 = none)");
    }
    if (cmd == Command::OracleCompare) {
      add_value(s, "--deltas", "deltas", "Probe detunings per parameter set");
      add_value(s, "--td-deltas", "td_deltas", "How many of them also run in the time domain");
      add_value(s, "--random", "random", "Number of random parameter draws (0: the preset only)");
    }
    states.push_back(std::move(st));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  SubcommandState* active = nullptr;
  for (auto& st : states)
    if (st->app->parsed()) active = st.get();

  lasekk::cli::EffectiveConfig cfg;
  try {
    lasekk::cli::Settings settings;
    if (!active->config_path.empty()) settings = lasekk::cli::load_settings_file(active->config_path);
    for (const auto& [opt, key] : active->options)
      if (opt->count() > 0) settings[key] = active->values[key];
    if (active->svg) settings["svg"] = "true";
    if (active->oracles) settings["oracles"] = "true";

    cfg = lasekk::cli::resolve(active->command, settings);
    lasekk::cli::OutputPaths out{lasekk::cli::resolve_output_path(
        active->out.empty() ? lasekk::cli::default_output_name(active->command) : active->out)};
    if (!active->write_config.empty()) {
      const auto path = lasekk::cli::resolve_output_path(active->write_config);
      std::ofstream f(path, std::ios::binary);
      if (!f) throw lasekk::ValidationError("cannot open '" + path + "' for writing");
      f << lasekk::cli::serialize(cfg);
    }
    return lasekk::cli::run(cfg, out, std::cout);
  } catch (const lasekk::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lasekk::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n  with " << lasekk::cli::describe_parameters(cfg)
              << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
