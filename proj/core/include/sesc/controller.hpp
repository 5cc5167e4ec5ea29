#pragma once

#include <cstdint>
#include <vector>

#include "sesc/delay_line.hpp"
#include "sesc/dither.hpp"
#include "sesc/metrics.hpp"
#include "sesc/quadratic_map.hpp"
#include "sesc/types.hpp"

namespace sesc {

enum class ControlMode { Classic, Predictor };

struct ControllerConfig {
  ControlMode mode = ControlMode::Classic;
  double c = 0.0;      // predictor filter gain, > 0 in predictor mode
  Vector k_diag;       // integrator gains, strictly positive
  // Cutoff of the first-order washout that removes the DC component of y
  // before demodulation (0 disables and the raw output is demodulated).
  // Without it the output's DC level leaks through M and N as broadband
  // noise that scales with 1/a and y*, swamping the gradient information.
  double washout_cutoff = 0.25;

  void validate(int n) const;
};

struct SimParams {
  double dt = 1e-3;
  double t_final = 0.0;
  Vector theta_hat0;
  int decimation = 1;
  double divergence_factor = 100.0;  // flag when |y| > factor * (|y*| + 1)
  double window_fraction = 0.2;      // statistics window for reports

  void validate(int n) const;
};

// Map output at the channelwise-delayed input [theta_1(t-D_1), ...].
double plant_output(const StaticQuadraticMap& map,
                    const std::vector<DelayLine>& theta_history,
                    const Vector& delays);

struct GradientHessianEstimates {
  Vector g_hat;
  Matrix h_hat;  // symmetric by construction
};

// Demodulated derivative estimates from one output sample:
//   g_hat = M(eta_delayed) * y,  h_hat = N(eta_delayed) * y,
// where eta_delayed stacks each channel's phase at its own delay.
GradientHessianEstimates estimates(double y, const Vector& eta_delayed,
                                   const DitherParams& dither);

// One closed-loop run: plant, dither, per-channel delay lines, and either the
// classic gradient law (theta_hat' = K g_hat) or the predictor feedback
//   U' = -c U + c K (g_hat + h_hat * [window integrals of U]),
//   theta_hat' = U,
// advanced by explicit Euler on a single dt grid shared with the delays.
//
// Within a step the measured output and the estimates are computed from the
// histories before the new actuator value is pushed, so the loop is strictly
// causal.  A run is a value: independent seeds can run concurrently.
class ClosedLoop {
 public:
  ClosedLoop(StaticQuadraticMap map, DitherParams dither, Vector delays,
             ControllerConfig controller, SimParams sim, std::uint64_t seed);

  // Advance one dt.
  void step();

  // Full horizon with decimated records; stops early when flagged diverged.
  Trajectory run();

  double time() const { return t_; }
  const Vector& theta() const { return theta_; }
  const Vector& theta_hat() const { return theta_hat_; }
  const Vector& control() const { return u_; }
  double output() const { return y_; }
  double demodulated_output() const { return y_washed_; }
  const Vector& gradient_estimate() const { return g_hat_; }
  const Matrix& hessian_estimate() const { return h_hat_; }
  const Vector& eta() const { return dither_.eta(); }
  bool diverged() const { return diverged_; }
  int dimension() const { return map_.dimension(); }
  const StaticQuadraticMap& map() const { return map_; }
  const SimParams& sim_params() const { return sim_; }
  const ControllerConfig& controller_config() const { return ctrl_; }

 private:
  void measure();

  StaticQuadraticMap map_;
  DitherParams dither_params_;
  Vector delays_;
  std::vector<int> delay_steps_;
  ControllerConfig ctrl_;
  SimParams sim_;

  DitherState dither_;
  std::vector<DelayLine> theta_history_;
  std::vector<DelayLine> eta_history_;
  std::vector<DelayLine> u_history_;

  Vector theta_hat_;
  Vector u_;
  Vector theta_;
  Vector g_hat_;
  Matrix h_hat_;

  double y_ = 0.0;
  double y_lowpass_ = 0.0;
  double y_washed_ = 0.0;
  double t_ = 0.0;
  bool diverged_ = false;
  double divergence_time_ = -1.0;

  // step workspace
  Vector theta_delayed_;
  Vector eta_delayed_;
  Vector sin_delayed_;
  Vector window_int_;
  Vector plant_dev_;
  Vector plant_hd_;
  Vector u_dot_;
  Vector h_int_;
};

}  // namespace sesc
