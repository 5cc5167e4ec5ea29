#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sesc/quadratic_map.hpp"
#include "sesc/types.hpp"

namespace sesc {

enum class RunStatus { Completed, Diverged, Converged };

const char* to_string(RunStatus status);

// Uniformly spaced record of one closed-loop run.  Spacing is dt * decimation;
// a diverged run simply stops early (records keep their spacing).
struct Trajectory {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<Vector> theta;
  std::vector<Vector> theta_hat;
  std::vector<Vector> u;
  std::vector<Vector> g_hat;
  std::vector<Matrix> h_hat;
  std::vector<Vector> eta;

  RunStatus status = RunStatus::Completed;
  double dt = 0.0;
  int decimation = 1;
  double divergence_time = -1.0;  // < 0 when the run was not flagged

  std::size_t size() const { return t.size(); }
  int dimension() const {
    return theta.empty() ? 0 : static_cast<int>(theta.front().size());
  }
};

struct ConvergenceReport {
  double theta_residual = 0.0;  // final-window mean of |theta - theta*|
  double y_residual = 0.0;      // final-window mean of |y - y*|
  double u_residual = 0.0;      // final-window mean of |U|
  double u_peak = 0.0;          // max |U| over the whole run
  double fitted_decay_rate = 0.0;
  double window_fraction = 0.0;
  Matrix h_hat_tail_average;    // entrywise final-window mean
  RunStatus status = RunStatus::Completed;
};

// Final-window statistics of a run.  The window is the trailing
// window_fraction of the recorded horizon and must be non-empty.
// fitted_decay_rate is the least-squares slope of log|theta - theta*| over
// the second half of the records (NaN when undefined).  status upgrades
// Completed to Converged when y_residual <= converged_y_tol.
ConvergenceReport residuals(const Trajectory& traj,
                            const StaticQuadraticMap& map,
                            double window_fraction,
                            double converged_y_tol = 0.25);

// Least-squares slope of log(values) against time; entries with
// values <= 0 are skipped.  NaN if fewer than two usable points.
double fit_log_slope(std::span<const double> t, std::span<const double> values);

struct SuccessEstimate {
  int successes = 0;
  int trials = 0;
  double fraction = 0.0;
  double ci_low = 0.0;   // exact (Clopper-Pearson) binomial interval
  double ci_high = 1.0;
};

SuccessEstimate binomial_estimate(int successes, int trials,
                                  double confidence = 0.95);

}  // namespace sesc
