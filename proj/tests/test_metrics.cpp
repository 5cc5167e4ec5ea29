#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sesc/metrics.hpp"

using namespace sesc;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

StaticQuadraticMap benchmark_map() {
  Matrix hessian(2, 2);
  hessian << -2.0, -2.0, -2.0, -4.0;
  return StaticQuadraticMap(5.0, vec2(0.0, 1.0), hessian);
}

Trajectory synthetic(std::size_t records, double dt,
                     const StaticQuadraticMap& map, double decay) {
  Trajectory traj;
  traj.dt = dt;
  traj.decimation = 1;
  for (std::size_t k = 0; k < records; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vector err = std::exp(decay * t) * vec2(1.0, -1.0);
    traj.t.push_back(t);
    traj.theta.push_back(map.theta_star() + err);
    traj.theta_hat.push_back(map.theta_star() + err);
    traj.y.push_back(map.evaluate(map.theta_star() + err));
    traj.u.push_back(decay * err);
    traj.g_hat.push_back(Vector::Zero(2));
    traj.h_hat.push_back(map.hessian());
    traj.eta.push_back(Vector::Zero(2));
  }
  return traj;
}

}  // namespace

TEST_CASE("constant trajectory at the optimum has zero residuals") {
  const auto map = benchmark_map();
  Trajectory traj = synthetic(100, 0.1, map, 0.0);
  for (auto& th : traj.theta) th = map.theta_star();
  for (auto& th : traj.theta_hat) th = map.theta_star();
  for (auto& y : traj.y) y = map.y_star();
  for (auto& u : traj.u) u = Vector::Zero(2);

  const ConvergenceReport report = residuals(traj, map, 0.2);
  CHECK(report.theta_residual == 0.0);
  CHECK(report.y_residual == 0.0);
  CHECK(report.u_residual == 0.0);
  CHECK(report.status == RunStatus::Converged);
  CHECK(report.h_hat_tail_average(1, 1) == doctest::Approx(-4.0));
}

TEST_CASE("fitted decay rate recovers a synthetic exponential") {
  const auto map = benchmark_map();
  const Trajectory traj = synthetic(2000, 0.1, map, -0.05);
  const ConvergenceReport report = residuals(traj, map, 0.2);
  CHECK(report.fitted_decay_rate == doctest::Approx(-0.05).epsilon(1e-6));
  CHECK(report.u_peak == doctest::Approx(0.05 * std::sqrt(2.0)));
}

TEST_CASE("diverged status propagates") {
  const auto map = benchmark_map();
  Trajectory traj = synthetic(50, 0.1, map, 0.0);
  traj.status = RunStatus::Diverged;
  CHECK(residuals(traj, map, 0.2).status == RunStatus::Diverged);
}

TEST_CASE("completed-but-high residual is not upgraded to converged") {
  const auto map = benchmark_map();
  Trajectory traj = synthetic(50, 0.1, map, 0.0);  // err stays at norm sqrt(2)
  const ConvergenceReport report = residuals(traj, map, 0.5, 0.25);
  CHECK(report.status == RunStatus::Completed);
  CHECK(report.y_residual > 0.25);
}

TEST_CASE("residuals validate their inputs") {
  const auto map = benchmark_map();
  CHECK_THROWS_AS(residuals(Trajectory{}, map, 0.2), std::invalid_argument);
  const Trajectory traj = synthetic(10, 0.1, map, 0.0);
  CHECK_THROWS_AS(residuals(traj, map, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(residuals(traj, map, 1.5), std::invalid_argument);
}

TEST_CASE("log-slope fit handles clean and degenerate data") {
  std::vector<double> t, v;
  for (int k = 0; k < 100; ++k) {
    t.push_back(0.5 * k);
    v.push_back(3.0 * std::exp(-0.2 * 0.5 * k));
  }
  CHECK(fit_log_slope(t, v) == doctest::Approx(-0.2).epsilon(1e-9));

  const std::vector<double> zeros(100, 0.0);
  CHECK(std::isnan(fit_log_slope(t, zeros)));

  const std::vector<double> single_t{1.0};
  const std::vector<double> single_v{2.0};
  CHECK(std::isnan(fit_log_slope(single_t, single_v)));
}

TEST_CASE("binomial interval matches closed forms") {
  // All successes: lower bound is (alpha/2)^(1/n).
  const SuccessEstimate all = binomial_estimate(20, 20);
  CHECK(all.fraction == 1.0);
  CHECK(all.ci_high == 1.0);
  CHECK(all.ci_low == doctest::Approx(std::pow(0.025, 1.0 / 20.0)).epsilon(1e-6));

  const SuccessEstimate none = binomial_estimate(0, 20);
  CHECK(none.ci_low == 0.0);
  CHECK(none.ci_high ==
        doctest::Approx(1.0 - std::pow(0.025, 1.0 / 20.0)).epsilon(1e-6));

  const SuccessEstimate half = binomial_estimate(10, 20);
  CHECK(half.fraction == 0.5);
  CHECK(half.ci_low == doctest::Approx(0.272).epsilon(0.01));
  CHECK(half.ci_high == doctest::Approx(0.728).epsilon(0.01));

  CHECK_THROWS_AS(binomial_estimate(5, 0), std::invalid_argument);
  CHECK_THROWS_AS(binomial_estimate(-1, 10), std::invalid_argument);
  CHECK_THROWS_AS(binomial_estimate(11, 10), std::invalid_argument);
}
