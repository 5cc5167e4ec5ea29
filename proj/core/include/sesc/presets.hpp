#pragma once

#include <string>
#include <vector>

#include "sesc/scenario.hpp"

namespace sesc {

// Named scenarios shipped with the library.  `fig*` presets reproduce the
// standard two-input benchmark: a quadratic map with extremum y* = 5 at
// theta* = (0, 1), dither amplitude 0.22, omega = 5, gains 0.005, and input
// delays diag(50, 100) for the delayed cases.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
const std::string& preset_text(const std::string& name);  // throws ConfigError
ScenarioConfig preset_config(const std::string& name);

// Loads a scenario from a file path or a preset name (file wins if both).
ScenarioConfig load_scenario(const std::string& path_or_preset);

}  // namespace sesc
