#include "sesc/controller.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sesc {

void ControllerConfig::validate(int n) const {
  if (k_diag.size() != n) {
    throw std::invalid_argument("controller: k_diag must have one gain per channel");
  }
  // Zero gains freeze the estimate, which is a legitimate probe setting;
  // scenario files still require strictly positive gains.
  if (!(k_diag.array() >= 0.0).all()) {
    throw std::invalid_argument("controller: gains must be >= 0");
  }
  if (mode == ControlMode::Predictor && !(c > 0.0)) {
    throw std::invalid_argument("controller: predictor mode requires c > 0");
  }
  if (washout_cutoff < 0.0) {
    throw std::invalid_argument("controller: washout_cutoff must be >= 0");
  }
}

void SimParams::validate(int n) const {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("sim: dt must be > 0");
  }
  if (!(t_final >= 0.0)) {
    throw std::invalid_argument("sim: t_final must be >= 0");
  }
  if (theta_hat0.size() != n) {
    throw std::invalid_argument("sim: theta_hat0 dimension mismatch");
  }
  if (decimation < 1) {
    throw std::invalid_argument("sim: decimation must be >= 1");
  }
  if (!(divergence_factor > 0.0)) {
    throw std::invalid_argument("sim: divergence_factor must be > 0");
  }
  if (!(window_fraction > 0.0) || window_fraction > 1.0) {
    throw std::invalid_argument("sim: window_fraction must be in (0, 1]");
  }
}

double plant_output(const StaticQuadraticMap& map,
                    const std::vector<DelayLine>& theta_history,
                    const Vector& delays) {
  const int n = map.dimension();
  if (static_cast<int>(theta_history.size()) != n || delays.size() != n) {
    throw std::invalid_argument("plant_output: dimension mismatch");
  }
  Vector theta_delayed(n);
  for (int i = 0; i < n; ++i) {
    theta_delayed[i] = theta_history[static_cast<std::size_t>(i)]
                           .value_at_delay(delays[i]);
  }
  return map.evaluate(theta_delayed);
}

namespace {

void estimates_into(double y, const Vector& sin_delayed,
                    const DitherParams& dither, Vector& g_hat, Matrix& h_hat) {
  const Eigen::Index n = sin_delayed.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ai = dither.amplitudes[i];
    const double si = sin_delayed[i];
    g_hat[i] = 2.0 / ai * si * y;
    h_hat(i, i) = 16.0 / (ai * ai) * (si * si - 0.5) * y;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v =
          4.0 / (ai * dither.amplitudes[j]) * si * sin_delayed[j] * y;
      h_hat(i, j) = v;
      h_hat(j, i) = v;
    }
  }
}

}  // namespace

GradientHessianEstimates estimates(double y, const Vector& eta_delayed,
                                   const DitherParams& dither) {
  if (eta_delayed.size() != dither.amplitudes.size()) {
    throw std::invalid_argument("estimates: dimension mismatch");
  }
  const Eigen::Index n = eta_delayed.size();
  Vector sin_delayed(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sin_delayed[i] = std::sin(eta_delayed[i]);
  }
  GradientHessianEstimates est{Vector(n), Matrix(n, n)};
  estimates_into(y, sin_delayed, dither, est.g_hat, est.h_hat);
  return est;
}

ClosedLoop::ClosedLoop(StaticQuadraticMap map, DitherParams dither,
                       Vector delays, ControllerConfig controller,
                       SimParams sim, std::uint64_t seed)
    : map_(std::move(map)),
      dither_params_(std::move(dither)),
      delays_(std::move(delays)),
      ctrl_(std::move(controller)),
      sim_(std::move(sim)),
      dither_(dither_params_, seed) {
  const int n = map_.dimension();
  dither_params_.validate();
  if (dither_params_.dimension() != n) {
    throw std::invalid_argument("closed loop: dither dimension mismatch");
  }
  if (delays_.size() != n) {
    throw std::invalid_argument("closed loop: one delay per channel required");
  }
  ctrl_.validate(n);
  sim_.validate(n);

  delay_steps_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (i > 0 && delays_[i] < delays_[i - 1]) {
      throw std::invalid_argument("closed loop: delays must be sorted ascending");
    }
    const int k = delay_to_steps(delays_[i], sim_.dt);
    if (k < 0) {
      throw std::invalid_argument(
          "closed loop: delay " + std::to_string(delays_[i]) +
          " is not a grid multiple of dt");
    }
    delay_steps_[static_cast<std::size_t>(i)] = k;
  }

  theta_hat_ = sim_.theta_hat0;
  u_ = Vector::Zero(n);
  g_hat_ = Vector::Zero(n);
  h_hat_ = Matrix::Zero(n, n);
  theta_ = theta_hat_ + signal_S(dither_.eta(), dither_params_);

  // Histories at rest: theta held at its initial value, eta at eta(0), and
  // zero control for t < 0.
  theta_history_.reserve(static_cast<std::size_t>(n));
  eta_history_.reserve(static_cast<std::size_t>(n));
  u_history_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    theta_history_.emplace_back(sim_.dt, delays_[i], theta_[i]);
    eta_history_.emplace_back(sim_.dt, delays_[i], dither_.eta()[i]);
    u_history_.emplace_back(sim_.dt, delays_[i], 0.0);
    u_history_.back().track_window(delays_[i]);
  }

  theta_delayed_ = Vector::Zero(n);
  eta_delayed_ = Vector::Zero(n);
  sin_delayed_ = Vector::Zero(n);
  window_int_ = Vector::Zero(n);
  plant_dev_ = Vector::Zero(n);
  plant_hd_ = Vector::Zero(n);
  u_dot_ = Vector::Zero(n);
  h_int_ = Vector::Zero(n);

  measure();
}

void ClosedLoop::measure() {
  const int n = map_.dimension();
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    theta_delayed_[i] = theta_history_[idx].value_at_steps(delay_steps_[idx]);
    eta_delayed_[i] = eta_history_[idx].value_at_steps(delay_steps_[idx]);
    sin_delayed_[i] = std::sin(eta_delayed_[i]);
  }

  plant_dev_ = theta_delayed_ - map_.theta_star();
  plant_hd_.noalias() = map_.hessian() * plant_dev_;
  y_ = map_.y_star() + 0.5 * plant_dev_.dot(plant_hd_);

  if (ctrl_.washout_cutoff > 0.0) {
    y_washed_ = y_ - y_lowpass_;
    y_lowpass_ += sim_.dt * ctrl_.washout_cutoff * y_washed_;
  } else {
    y_washed_ = y_;
  }

  estimates_into(y_washed_, sin_delayed_, dither_params_, g_hat_, h_hat_);

  if (ctrl_.mode == ControlMode::Classic) {
    u_ = ctrl_.k_diag.cwiseProduct(g_hat_);
  }

  if (!diverged_) {
    const bool finite = std::isfinite(y_) && theta_hat_.allFinite() &&
                        u_.allFinite();
    if (!finite ||
        std::abs(y_) > sim_.divergence_factor * (std::abs(map_.y_star()) + 1.0)) {
      diverged_ = true;
      divergence_time_ = t_;
    }
  }
}

void ClosedLoop::step() {
  const int n = map_.dimension();

  if (ctrl_.mode == ControlMode::Classic) {
    theta_hat_ += sim_.dt * u_;  // u = K g_hat from the last measurement
  } else {
    for (int i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      window_int_[i] = u_history_[idx].tracked_window_integral(delays_[i]);
    }
    h_int_.noalias() = h_hat_ * window_int_;
    for (int i = 0; i < n; ++i) {
      u_dot_[i] = -ctrl_.c * u_[i] +
                  ctrl_.c * ctrl_.k_diag[i] * (g_hat_[i] + h_int_[i]);
    }
    theta_hat_ += sim_.dt * u_;  // old U drives theta_hat in the same step
    u_ += sim_.dt * u_dot_;
  }

  dither_.advance(dither_params_, sim_.dt);
  const Vector& eta = dither_.eta();
  for (int i = 0; i < n; ++i) {
    theta_[i] = theta_hat_[i] +
                dither_params_.amplitudes[i] * std::sin(eta[i]);
  }
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    theta_history_[idx].push(theta_[i]);
    eta_history_[idx].push(eta[i]);
    u_history_[idx].push(u_[i]);
  }
  t_ += sim_.dt;

  measure();
}

Trajectory ClosedLoop::run() {
  Trajectory traj;
  traj.dt = sim_.dt;
  traj.decimation = sim_.decimation;

  const auto steps = static_cast<long long>(std::llround(sim_.t_final / sim_.dt));
  const auto expected =
      static_cast<std::size_t>(steps / sim_.decimation) + 1;
  traj.t.reserve(expected);
  traj.y.reserve(expected);
  traj.theta.reserve(expected);
  traj.theta_hat.reserve(expected);
  traj.u.reserve(expected);
  traj.g_hat.reserve(expected);
  traj.h_hat.reserve(expected);
  traj.eta.reserve(expected);

  auto record = [&] {
    traj.t.push_back(t_);
    traj.y.push_back(y_);
    traj.theta.push_back(theta_);
    traj.theta_hat.push_back(theta_hat_);
    traj.u.push_back(u_);
    traj.g_hat.push_back(g_hat_);
    traj.h_hat.push_back(h_hat_);
    traj.eta.push_back(dither_.eta());
  };

  record();
  if (diverged_) {  // initial state can already trip the flag
    traj.status = RunStatus::Diverged;
    traj.divergence_time = divergence_time_;
    return traj;
  }
  for (long long k = 1; k <= steps; ++k) {
    step();
    if (k % sim_.decimation == 0) {
      record();
    }
    if (diverged_) {
      traj.status = RunStatus::Diverged;
      traj.divergence_time = divergence_time_;
      break;
    }
  }
  return traj;
}

}  // namespace sesc
