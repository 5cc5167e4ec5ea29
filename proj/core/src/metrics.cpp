#include "sesc/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sesc {

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return "completed";
    case RunStatus::Diverged: return "diverged";
    case RunStatus::Converged: return "converged";
  }
  return "unknown";
}

ConvergenceReport residuals(const Trajectory& traj,
                            const StaticQuadraticMap& map,
                            double window_fraction, double converged_y_tol) {
  if (traj.size() == 0) {
    throw std::invalid_argument("residuals: empty trajectory");
  }
  if (!(window_fraction > 0.0) || window_fraction > 1.0) {
    throw std::invalid_argument("residuals: window_fraction must be in (0, 1]");
  }
  const std::size_t n_rec = traj.size();
  const double t_end = traj.t.back();
  const double t_start = traj.t.front();
  const double window_begin = t_end - window_fraction * (t_end - t_start);

  std::size_t first = 0;
  while (first < n_rec && traj.t[first] < window_begin) {
    ++first;
  }
  if (first >= n_rec) {
    throw std::invalid_argument("residuals: final window is empty");
  }

  ConvergenceReport report;
  report.window_fraction = window_fraction;
  const int n = traj.dimension();
  report.h_hat_tail_average = Matrix::Zero(n, n);

  double sum_theta = 0.0;
  double sum_y = 0.0;
  double sum_u = 0.0;
  const std::size_t count = n_rec - first;
  for (std::size_t k = first; k < n_rec; ++k) {
    sum_theta += (traj.theta[k] - map.theta_star()).norm();
    sum_y += std::abs(traj.y[k] - map.y_star());
    sum_u += traj.u[k].norm();
    report.h_hat_tail_average += traj.h_hat[k];
  }
  report.theta_residual = sum_theta / static_cast<double>(count);
  report.y_residual = sum_y / static_cast<double>(count);
  report.u_residual = sum_u / static_cast<double>(count);
  report.h_hat_tail_average /= static_cast<double>(count);

  for (std::size_t k = 0; k < n_rec; ++k) {
    report.u_peak = std::max(report.u_peak, traj.u[k].norm());
  }

  // Decay fit over the second half of the records.
  std::vector<double> err(n_rec);
  for (std::size_t k = 0; k < n_rec; ++k) {
    err[k] = (traj.theta[k] - map.theta_star()).norm();
  }
  const std::size_t half = n_rec / 2;
  report.fitted_decay_rate =
      fit_log_slope(std::span(traj.t).subspan(half), std::span(err).subspan(half));

  if (traj.status == RunStatus::Diverged) {
    report.status = RunStatus::Diverged;
  } else {
    report.status = report.y_residual <= converged_y_tol
                        ? RunStatus::Converged
                        : RunStatus::Completed;
  }
  return report;
}

double fit_log_slope(std::span<const double> t,
                     std::span<const double> values) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < t.size() && k < values.size(); ++k) {
    if (!(values[k] > 0.0) || !std::isfinite(values[k])) {
      continue;
    }
    const double x = t[k];
    const double y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (denom == 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

namespace {

double binomial_cdf(int k, int n, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  // Sum of pmf terms via running log factorials; n stays small here.
  double cdf = 0.0;
  double log_choose = 0.0;  // log C(n, 0)
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  for (int i = 0; i <= k; ++i) {
    if (i > 0) {
      log_choose += std::log(static_cast<double>(n - i + 1)) -
                    std::log(static_cast<double>(i));
    }
    cdf += std::exp(log_choose + i * lp + (n - i) * lq);
  }
  return std::min(cdf, 1.0);
}

// Smallest p (bisection) such that f(p) crosses target; f monotone in p.
template <typename F>
double bisect(F f, double target, bool increasing) {
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const bool above = f(mid) > target;
    if (above == increasing) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SuccessEstimate binomial_estimate(int successes, int trials,
                                  double confidence) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw std::invalid_argument("binomial_estimate: invalid counts");
  }
  SuccessEstimate est;
  est.successes = successes;
  est.trials = trials;
  est.fraction = static_cast<double>(successes) / trials;
  const double alpha = 1.0 - confidence;

  if (successes == 0) {
    est.ci_low = 0.0;
  } else {
    // Largest p with P(X >= successes | p) <= alpha/2.
    est.ci_low = bisect(
        [&](double p) { return 1.0 - binomial_cdf(successes - 1, trials, p); },
        alpha / 2.0, /*increasing=*/true);
  }
  if (successes == trials) {
    est.ci_high = 1.0;
  } else {
    est.ci_high = bisect(
        [&](double p) { return binomial_cdf(successes, trials, p); },
        alpha / 2.0, /*increasing=*/false);
  }
  return est;
}

}  // namespace sesc
