#pragma once

#include <string>
#include <vector>

#include "lasekk/laser_clamp.hpp"
#include "lasekk/medium.hpp"
#include "lasekk/pump_probe.hpp"

namespace lasekk::cli {

enum class Family { Laser, Probe };

/// Named parameter set. Laser presets fill `medium`, `cavity` and `gq`;
/// probe presets fill `probe`.
struct Preset {
  std::string name;
  Family family{};
  MediumParamsd medium{};
  CavityParamsd cavity{};
  double gq{};  // Q G, the primary knob; G is derived as gq / q
  PumpProbeParamsd probe{};
};

/// fig1, fig4a, fig4b, fig4c, fig4d. Throws ValidationError on an unknown name.
const Preset& find_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace lasekk::cli
