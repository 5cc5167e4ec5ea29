#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sesc/averaged.hpp"
#include "sesc/controller.hpp"
#include "sesc/dither.hpp"
#include "sesc/quadratic_map.hpp"
#include "sesc/types.hpp"

namespace sesc {

// Grid and horizon for the averaged-system analyzer; the stochastic loop's dt
// is far finer than the transport CFL bound requires, so these are separate.
struct AveragedParams {
  int grid_cells = 200;
  double dt = 0.02;
  double t_final = 2000.0;
  int decimation = 10;
};

// Pass/fail rule applied per run when aggregating a batch.
struct BatchCriterion {
  enum class Kind { Converged, Diverged };
  Kind kind = Kind::Converged;
  double max_y_residual = 0.25;  // used by Converged
};

// One scenario file, fully validated.  Loading reports every violated field
// at once; a loaded config round-trips losslessly through to_toml().
struct ScenarioConfig {
  std::string name = "scenario";

  double map_y_star = 0.0;
  Vector map_theta_star;
  Matrix map_hessian;

  Vector delays;

  DitherParams dither;
  std::uint64_t seed = 1;

  ControllerConfig controller;
  SimParams sim;
  AveragedParams averaged;
  BatchCriterion batch;

  int dimension() const { return static_cast<int>(map_theta_star.size()); }

  StaticQuadraticMap make_map() const;
  ClosedLoop make_loop(std::optional<std::uint64_t> seed_override = {}) const;
  AveragedSystem make_averaged(std::optional<double> c_override = {}) const;
  Vector averaged_initial_error() const;  // theta_hat0 - theta_star
  bool satisfies(const ConvergenceReport& report) const;

  std::string to_toml() const;
  static ScenarioConfig from_text(const std::string& text,
                                  const std::string& name);
  static ScenarioConfig from_file(const std::string& path);
};

}  // namespace sesc
