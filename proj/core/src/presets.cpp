#include "sesc/presets.hpp"

#include <filesystem>
#include <utility>

#include "sesc/errors.hpp"

namespace sesc {

namespace {

constexpr const char* kFig3NoDelay = R"(# Classic gradient stochastic extremum seeking, no input delays.
# The loop climbs to the extremum y* = 5 at theta* = (0, 1).

[map]
y_star = 5.0
theta_star = [0.0, 1.0]
hessian = [[-2.0, -2.0], [-2.0, -4.0]]

[delays]
d = [0.0, 0.0]

[dither]
a = [0.22, 0.22]
omega = 5.0
phase = "wiener"
seed = 1

[controller]
mode = "classic"
k_diag = [0.005, 0.005]
washout_cutoff = 0.25

[sim]
dt = 0.001
t_final = 500.0
theta_hat0 = [1.0, 0.0]
decimation = 100
divergence_factor = 100.0
window_fraction = 0.2

[batch]
criterion = "converged"
max_y_residual = 0.2
)";

constexpr const char* kFig5NoPredictor = R"(# Classic gradient stochastic extremum seeking with input delays
# diag(50, 100) and no compensation: the loop goes unstable and the run is
# flagged diverged.

[map]
y_star = 5.0
theta_star = [0.0, 1.0]
hessian = [[-2.0, -2.0], [-2.0, -4.0]]

[delays]
d = [50.0, 100.0]

[dither]
a = [0.22, 0.22]
omega = 5.0
phase = "wiener"
seed = 1

[controller]
mode = "classic"
k_diag = [0.005, 0.005]
washout_cutoff = 0.25

[sim]
dt = 0.001
t_final = 12000.0
theta_hat0 = [1.0, 0.0]
decimation = 100
divergence_factor = 100.0
window_fraction = 0.2

[batch]
criterion = "diverged"
)";

constexpr const char* kFig7PredictorDelays = R"(# Predictor-feedback stochastic extremum seeking with input delays
# diag(50, 100): the reduction-based predictor restores convergence to the
# extremum y* = 5 at theta* = (0, 1).

[map]
y_star = 5.0
theta_star = [0.0, 1.0]
hessian = [[-2.0, -2.0], [-2.0, -4.0]]

[delays]
d = [50.0, 100.0]

[dither]
a = [0.22, 0.22]
omega = 5.0
phase = "wiener"
seed = 1

[controller]
mode = "predictor"
c = 20.0
k_diag = [0.005, 0.005]
washout_cutoff = 0.25

[sim]
dt = 0.001
t_final = 5000.0
theta_hat0 = [1.0, 0.0]
decimation = 100
divergence_factor = 100.0
window_fraction = 0.2

[averaged]
m = 200
dt = 0.02
t_final = 2000.0
decimation = 10

[batch]
criterion = "converged"
max_y_residual = 0.25
)";

constexpr const char* kFig9Hessian = R"(# Same closed loop as fig7_predictor_delays; the summary's Hhat tail
# averages show the demodulated Hessian estimate settling on the true
# Hessian entries (-2, -2, -2, -4).

[map]
y_star = 5.0
theta_star = [0.0, 1.0]
hessian = [[-2.0, -2.0], [-2.0, -4.0]]

[delays]
d = [50.0, 100.0]

[dither]
a = [0.22, 0.22]
omega = 5.0
phase = "wiener"
seed = 1

[controller]
mode = "predictor"
c = 20.0
k_diag = [0.005, 0.005]
washout_cutoff = 0.25

[sim]
dt = 0.001
t_final = 5000.0
theta_hat0 = [1.0, 0.0]
decimation = 100
divergence_factor = 100.0
window_fraction = 0.2

[averaged]
m = 200
dt = 0.02
t_final = 2000.0
decimation = 10

[batch]
criterion = "converged"
max_y_residual = 0.25
)";

constexpr const char* kTrendShortDelay = R"(# Short-delay predictor scenario with faster gains, used for residual
# trend studies over the dither frequency and amplitude.

[map]
y_star = 5.0
theta_star = [0.0, 1.0]
hessian = [[-2.0, -2.0], [-2.0, -4.0]]

[delays]
d = [1.0, 2.0]

[dither]
a = [0.22, 0.22]
omega = 5.0
phase = "wiener"
seed = 1

[controller]
mode = "predictor"
c = 20.0
k_diag = [0.005, 0.005]
washout_cutoff = 0.5

[sim]
dt = 0.001
t_final = 200.0
theta_hat0 = [1.0, 0.0]
decimation = 20
divergence_factor = 100.0
window_fraction = 0.2

[averaged]
m = 50
dt = 0.02
t_final = 200.0
decimation = 5

[batch]
criterion = "converged"
max_y_residual = 0.5
)";

const std::vector<std::pair<std::string, std::string>>& registry() {
  static const std::vector<std::pair<std::string, std::string>> presets = {
      {"fig3_nodelay", kFig3NoDelay},
      {"fig5_nopredictor", kFig5NoPredictor},
      {"fig7_predictor_delays", kFig7PredictorDelays},
      {"fig9_hessian", kFig9Hessian},
      {"trend_short_delay", kTrendShortDelay},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  names.reserve(registry().size());
  for (const auto& [name, text] : registry()) {
    names.push_back(name);
  }
  return names;
}

bool is_preset(const std::string& name) {
  for (const auto& [preset, text] : registry()) {
    if (preset == name) {
      return true;
    }
  }
  return false;
}

const std::string& preset_text(const std::string& name) {
  for (const auto& [preset, text] : registry()) {
    if (preset == name) {
      return text;
    }
  }
  throw ConfigError({"unknown preset '" + name + "'"});
}

ScenarioConfig preset_config(const std::string& name) {
  return ScenarioConfig::from_text(preset_text(name), name);
}

ScenarioConfig load_scenario(const std::string& path_or_preset) {
  if (std::filesystem::exists(path_or_preset)) {
    return ScenarioConfig::from_file(path_or_preset);
  }
  if (is_preset(path_or_preset)) {
    return preset_config(path_or_preset);
  }
  throw ConfigError({path_or_preset + ": no such file or preset"});
}

}  // namespace sesc
