#pragma once

#include <vector>

#include "sesc/types.hpp"

namespace sesc {

// Converts a delay to a whole number of dt steps.  Delays must sit on the
// sample grid: |k*dt - delay| <= 1e-9 * max(1, delay).  Returns -1 when the
// delay is off-grid or negative.
int delay_to_steps(double delay, double dt);

// Fixed-rate sampled history of one scalar signal.  The buffer is pre-filled
// with an initial value, so delayed reads are defined from the first step
// (history before t=0 is the configured rest value).  Reads are exact sample
// lookups: no interpolation, which is why delays must be grid multiples.
class DelayLine {
 public:
  // Capacity covers max_delay plus the current sample.
  DelayLine(double dt, double max_delay, double initial_fill);

  void push(double sample);

  double newest() const { return ring_[static_cast<std::size_t>(head_)]; }

  // Sample from steps_back pushes ago (0 = newest).
  double value_at_steps(int steps_back) const;

  // Sample from `delay` time units ago.  Throws std::invalid_argument if the
  // delay is negative, off-grid, or exceeds capacity.
  double value_at_delay(double delay) const;

  // Trapezoidal integral of the stored signal over the trailing window
  // [t - delay, t], recomputed from the samples on every call.
  double window_integral(double delay) const;

  // Registers a trailing window whose trapezoidal integral is maintained
  // incrementally on every push.  tracked_window_integral then returns it in
  // O(1); it matches window_integral up to rounding drift (~1e-9 relative
  // over millions of pushes).
  void track_window(double delay);
  double tracked_window_integral(double delay) const;

  double dt() const { return dt_; }
  int capacity() const { return capacity_; }

 private:
  int checked_steps(double delay) const;

  double dt_;
  int capacity_;
  int head_ = 0;
  std::vector<double> ring_;

  struct TrackedWindow {
    int steps;
    double integral;
  };
  std::vector<TrackedWindow> tracked_;
};

}  // namespace sesc
