#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "lasekk/cli_io/presets.hpp"
#include "lasekk/grid.hpp"
#include "lasekk/spectrum.hpp"

namespace lasekk::cli {

/// Raw key/value settings before merging, from a config file and/or flags.
/// Later sources overwrite earlier ones key by key.
using Settings = std::map<std::string, std::string>;

/// Parses flat `key = value` text; '#' starts a comment, blank lines are
/// ignored. Unknown keys and duplicate keys are errors.
Settings parse_settings(const std::string& text, const std::string& origin = "config");
Settings load_settings_file(const std::string& path);

enum class Command { LaserProfile, ProbeSpectrum, KKCheck, OracleCompare };

const char* command_name(Command c);

/// Fully merged, validated configuration: preset values with overrides
/// applied and every default made explicit.
struct EffectiveConfig {
  Command command{};
  std::string preset;
  Family family{};
  MediumParamsd medium{};
  CavityParamsd cavity{};
  double gq{};
  PumpProbeParamsd probe{};
  UniformGrid<double> grid{};
  std::uint64_t seed{};
  bool svg{};
  bool oracles{};
  int deltas{};     // oracle-compare: delta samples per parameter set
  int td_deltas{};  // oracle-compare: of those, how many also go through the time domain
  int random{};     // oracle-compare: number of random draws (0: preset only)
  std::string input;  // kk-check: spectrum CSV instead of a preset
  TailExponents tails{};
};

/// Merges `s` over the preset it names (or the command's default preset)
/// and validates the result. Throws ValidationError.
EffectiveConfig resolve(Command command, const Settings& s);

/// Serializes in a form that `parse_settings` + `resolve` map back to the
/// same EffectiveConfig, bit for bit.
std::string serialize(const EffectiveConfig& cfg);

/// One-line human summary of the physical parameters, for diagnostics.
std::string describe_parameters(const EffectiveConfig& cfg);

}  // namespace lasekk::cli
