#include "lasekk/cli_io/presets.hpp"

#include <numbers>

namespace lasekk::cli {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Preset laser_preset() {
  Preset p;
  p.name = "fig1";
  p.family = Family::Laser;
  p.gq = 3.0;
  p.cavity = {3.8e8, kTwoPi * 3.8e14};
  p.medium = {kTwoPi * 1e9, kTwoPi * 3.8e14, p.gq / p.cavity.q_factor};
  return p;
}

Preset probe_preset(const char* name, double delta_pump, double omega1, bool pumped) {
  Preset p;
  p.name = name;
  p.family = Family::Probe;
  const double gamma = kTwoPi * 1e7;
  p.probe = {gamma, kTwoPi * 5e6, pumped ? 2.0 * gamma : 0.0, delta_pump, omega1, 1.0};
  return p;
}

const std::vector<Preset>& all() {
  static const std::vector<Preset> presets = {
      laser_preset(),
      probe_preset("fig4a", 0.0, kTwoPi * 36e6, false),
      probe_preset("fig4b", 0.0, kTwoPi * 36e6, true),
      probe_preset("fig4c", kTwoPi * 2e7, kTwoPi * 66e6, false),
      probe_preset("fig4d", kTwoPi * 2e7, kTwoPi * 66e6, true),
  };
  return presets;
}

}  // namespace

const Preset& find_preset(const std::string& name) {
  for (const auto& p : all())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : all()) known += (known.empty() ? "" : ", ") + p.name;
  throw ValidationError("unknown preset '" + name + "' (known: " + known + ")");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : all()) names.push_back(p.name);
  return names;
}

}  // namespace lasekk::cli
