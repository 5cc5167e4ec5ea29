#include "sesc/delay_line.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sesc {

int delay_to_steps(double delay, double dt) {
  if (!(dt > 0.0) || delay < 0.0 || !std::isfinite(delay)) {
    return -1;
  }
  const auto k = static_cast<long long>(std::llround(delay / dt));
  if (k < 0) {
    return -1;
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(delay));
  if (std::abs(static_cast<double>(k) * dt - delay) > tol) {
    return -1;
  }
  return static_cast<int>(k);
}

DelayLine::DelayLine(double dt, double max_delay, double initial_fill)
    : dt_(dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("delay line: dt must be > 0");
  }
  const int max_steps = delay_to_steps(max_delay, dt);
  if (max_steps < 0) {
    throw std::invalid_argument(
        "delay line: max_delay must be a nonnegative grid multiple of dt");
  }
  capacity_ = max_steps + 1;
  ring_.assign(static_cast<std::size_t>(capacity_), initial_fill);
}

int DelayLine::checked_steps(double delay) const {
  const int k = delay_to_steps(delay, dt_);
  if (k < 0) {
    throw std::invalid_argument("delay line: delay " + std::to_string(delay) +
                                " is not a grid multiple of dt");
  }
  if (k >= capacity_) {
    throw std::invalid_argument("delay line: delay " + std::to_string(delay) +
                                " exceeds buffer capacity");
  }
  return k;
}

double DelayLine::value_at_steps(int steps_back) const {
  int idx = head_ - steps_back;
  idx %= capacity_;
  if (idx < 0) {
    idx += capacity_;
  }
  return ring_[static_cast<std::size_t>(idx)];
}

double DelayLine::value_at_delay(double delay) const {
  return value_at_steps(checked_steps(delay));
}

double DelayLine::window_integral(double delay) const {
  const int k = checked_steps(delay);
  if (k == 0) {
    return 0.0;
  }
  // Oldest-to-newest accumulation; the discretized transport-grid integral in
  // the tests mirrors this order so the two agree bitwise.
  double acc = 0.5 * value_at_steps(k);
  for (int j = k - 1; j >= 1; --j) {
    acc += value_at_steps(j);
  }
  acc += 0.5 * newest();
  return dt_ * acc;
}

void DelayLine::track_window(double delay) {
  const int k = checked_steps(delay);
  for (const auto& w : tracked_) {
    if (w.steps == k) {
      return;
    }
  }
  tracked_.push_back({k, window_integral(delay)});
}

double DelayLine::tracked_window_integral(double delay) const {
  const int k = checked_steps(delay);
  for (const auto& w : tracked_) {
    if (w.steps == k) {
      return w.integral;
    }
  }
  throw std::invalid_argument("delay line: window not tracked");
}

void DelayLine::push(double sample) {
  // Sliding trapezoid update: the window [t-D, t] gains the (s_t, s_new) edge
  // and loses the (s_{t-K}, s_{t-K+1}) edge.  Reads happen before the ring is
  // advanced, while all four samples are still present.
  for (auto& w : tracked_) {
    if (w.steps == 0) {
      continue;
    }
    const double gain = sample + newest();
    const double loss = value_at_steps(w.steps) + value_at_steps(w.steps - 1);
    w.integral += 0.5 * dt_ * (gain - loss);
  }
  head_ = (head_ + 1) % capacity_;
  ring_[static_cast<std::size_t>(head_)] = sample;
}

}  // namespace sesc
