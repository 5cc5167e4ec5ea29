#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "sesc/averaged.hpp"
#include "sesc/controller.hpp"
#include "sesc/metrics.hpp"

using namespace sesc;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix benchmark_hessian() {
  Matrix h(2, 2);
  h << -2.0, -2.0, -2.0, -4.0;
  return h;
}

AveragedSystem benchmark_system(double c = 20.0, int m = 200,
                                double dt = 0.02) {
  return AveragedSystem(benchmark_hessian(), Vector::Constant(2, 0.005), c,
                        vec2(50.0, 100.0), m, dt);
}

}  // namespace

TEST_CASE("critical filter gain on the identity pair") {
  CHECK(critical_filter_gain(Matrix(-Matrix::Identity(2, 2)),
                             Vector(Vector::Ones(2))) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(critical_filter_gain(Matrix(-Matrix::Identity(4, 4)),
                             Vector(Vector::Ones(4))) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("critical filter gain matches the eigendecomposition oracle") {
  // Independent derivation: eigs(-H) = 3 +- sqrt(5); with K = k*I,
  // -HKHKH = k^2 (-H)^3, so
  //   c* = 1 + k^2 (3+sqrt(5))^3 / (3-sqrt(5)).
  const double k = 0.005;
  const double lam_hi = 3.0 + std::sqrt(5.0);
  const double lam_lo = 3.0 - std::sqrt(5.0);
  const double expected = 1.0 + k * k * lam_hi * lam_hi * lam_hi / lam_lo;
  const double got =
      critical_filter_gain(benchmark_hessian(), Vector(Vector::Constant(2, k)));
  CHECK(got == doctest::Approx(expected).epsilon(1e-10));
  CHECK(got == doctest::Approx(1.0047).epsilon(1e-3));
}

TEST_CASE("critical filter gain scales quadratically in the gain") {
  const Matrix h = benchmark_hessian();
  const double base = critical_filter_gain(h, Vector(Vector::Constant(2, 0.005)));
  for (double alpha : {2.0, 10.0}) {
    const double scaled =
        critical_filter_gain(h, Vector(Vector::Constant(2, alpha * 0.005)));
    CHECK(scaled - 1.0 ==
          doctest::Approx(alpha * alpha * (base - 1.0)).epsilon(1e-10));
  }
}

TEST_CASE("critical filter gain rejects bad inputs") {
  CHECK_THROWS_AS(
      critical_filter_gain(Matrix(Matrix::Identity(2, 2)), Vector(Vector::Ones(2))),
      std::invalid_argument);  // positive definite
  Matrix asym(2, 2);
  asym << -2.0, -1.0, -2.0, -4.0;
  CHECK_THROWS_AS(critical_filter_gain(asym, Vector(Vector::Ones(2))),
                  std::invalid_argument);
  Matrix gain(2, 2);
  gain << 1.0, 0.5, 0.5, 1.0;
  CHECK_THROWS_AS(critical_filter_gain(benchmark_hessian(), gain),
                  std::invalid_argument);  // not diagonal
  CHECK_THROWS_AS(
      critical_filter_gain(benchmark_hessian(), Vector(vec2(1.0, -1.0))),
      std::invalid_argument);  // negative gain
}

TEST_CASE("origin is a fixed point of the averaged step") {
  const auto sys = benchmark_system();
  auto state = sys.initial(vec2(0.0, 0.0));
  sys.step(state);
  CHECK(state.theta_tilde.norm() == 0.0);
  CHECK(state.u_boundary.norm() == 0.0);
  CHECK(state.u_grid.norm() == 0.0);
}

TEST_CASE("constructor rejects CFL and stiffness violations") {
  CHECK_THROWS_AS(benchmark_system(20.0, 200, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(benchmark_system(20.0, 200, 0.15), std::invalid_argument);
  CHECK_THROWS_AS(
      AveragedSystem(benchmark_hessian(), Vector::Constant(2, 0.005), 20.0,
                     vec2(0.0, 100.0), 200, 0.02),
      std::invalid_argument);  // zero delay has no transport channel
}

TEST_CASE("reduction transform special cases") {
  const auto sys = benchmark_system();

  // Empty integral: transform reduces to H * theta_tilde = H (1, -1).
  auto state = sys.initial(vec2(1.0, -1.0));
  const Vector v0 = sys.reduction_transform(state);
  CHECK(v0[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v0[1] == doctest::Approx(2.0).epsilon(1e-12));

  // Constant profile: integral of D u over x is D*v, so transform is H D v.
  state = sys.initial(vec2(0.0, 0.0));
  state.u_grid.row(0).setConstant(0.3);
  state.u_grid.row(1).setConstant(-0.1);
  const Vector v1 = sys.reduction_transform(state);
  const Vector expected = benchmark_hessian() * vec2(50.0 * 0.3, 100.0 * -0.1);
  CHECK(v1[0] == doctest::Approx(expected[0]).epsilon(1e-10));
  CHECK(v1[1] == doctest::Approx(expected[1]).epsilon(1e-10));
}

TEST_CASE("auxiliary control special cases") {
  const auto sys = benchmark_system();
  auto state = sys.initial(vec2(1.0, -1.0));

  // U = K * transform gives zero mismatch.
  const Vector v = sys.reduction_transform(state);
  state.u_boundary = Vector(0.005 * v.array());
  CHECK(sys.auxiliary_control(state).norm() < 1e-15);

  // Zero transform leaves U unchanged.
  state = sys.initial(vec2(0.0, 0.0));
  state.u_boundary = vec2(0.4, -0.2);
  const Vector w = sys.auxiliary_control(state);
  CHECK(w[0] == 0.4);
  CHECK(w[1] == -0.2);
}

TEST_CASE("lyapunov functional at hand-evaluated states") {
  const auto sys = benchmark_system();

  auto origin = sys.initial(vec2(0.0, 0.0));
  CHECK(sys.lyapunov(origin) == 0.0);

  // theta_tilde = 0, u = 0, U = v: transform is 0, mismatch is v, so
  // V = 1/2 v^T (-H) v.
  auto state = sys.initial(vec2(0.0, 0.0));
  state.u_boundary = vec2(0.3, -0.7);
  const Vector v = vec2(0.3, -0.7);
  const double expected = 0.5 * v.dot(Matrix(-benchmark_hessian()) * v);
  CHECK(sys.lyapunov(state) == doctest::Approx(expected).epsilon(1e-12));

  // Positivity away from the origin.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = sys.initial(vec2(dist(rng), dist(rng)));
    s.u_boundary = vec2(dist(rng), dist(rng));
    for (int j = 0; j <= sys.grid_cells(); ++j) {
      s.u_grid(0, j) = dist(rng);
      s.u_grid(1, j) = dist(rng);
    }
    if (s.theta_tilde.norm() + s.u_boundary.norm() + s.u_grid.norm() > 1e-9) {
      CHECK(sys.lyapunov(s) > 0.0);
    }
  }
}

TEST_CASE("transform derivative tracks H * U along a trajectory") {
  // d/dt of the reduction transform equals H U up to discretization error.
  const auto sys = benchmark_system(20.0, 100, 0.02);
  auto state = sys.initial(vec2(1.0, -1.0));
  for (int k = 0; k < 200; ++k) {
    sys.step(state);
  }
  for (int k = 0; k < 50; ++k) {
    const Vector before = sys.reduction_transform(state);
    const Vector u_before = state.u_boundary;
    sys.step(state);
    const Vector after = sys.reduction_transform(state);
    const Vector fd = (after - before) / sys.dt();
    const Vector expected = benchmark_hessian() * u_before;
    // First-order transport discretization: O(dt + 1/m) relative slack.
    CHECK((fd - expected).norm() <=
          0.05 * std::max(1e-8, expected.norm()) + 1e-8);
  }
}

TEST_CASE("averaged benchmark run decays with certificates intact") {
  const auto sys = benchmark_system();
  const AveragedRunResult res = run_averaged(sys, vec2(1.0, -1.0), 1200.0, 10);

  // V(0) by hand: transform v = H(1,-1) = (0,2), V = v^T K v + 1/2 (Kv)^T(-H)(Kv).
  CHECK(res.initial_lyapunov == doctest::Approx(0.0202).epsilon(1e-10));
  CHECK(res.fitted_decay_rate < 0.0);
  CHECK(res.max_step_increase <= 1e-6 * res.initial_lyapunov);
  CHECK(res.lyapunov.back() < res.initial_lyapunov * 1e-3);

  // The auxiliary control settles to zero with the rest of the state.
  const Vector u_final = res.u_boundary.back();
  CHECK(u_final.norm() < 1e-3);

  // Norm-equivalence path: Psi decays with a strictly negative fitted rate.
  const std::size_t half = res.t.size() / 2;
  const double psi_rate =
      fit_log_slope(std::span(res.t).subspan(half),
                    std::span(res.norm_psi).subspan(half));
  CHECK(psi_rate < 0.0);
}

TEST_CASE("below-threshold gain is not asserted unstable, only recorded") {
  // c < c* voids the certificate but the system may still decay; just check
  // the run completes and reports finite values.
  const auto sys = benchmark_system(0.5, 200, 0.02);
  const AveragedRunResult res = run_averaged(sys, vec2(1.0, -1.0), 200.0, 10);
  CHECK(std::isfinite(res.lyapunov.back()));
}

TEST_CASE("lyapunov functional is norm-equivalent on random states") {
  const auto sys = benchmark_system(20.0, 60, 0.02);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);

  auto sample_ratio = [&] {
    auto s = sys.initial(vec2(dist(rng), dist(rng)));
    s.u_boundary = vec2(dist(rng), dist(rng));
    for (int j = 0; j <= sys.grid_cells(); ++j) {
      s.u_grid(0, j) = dist(rng);
      s.u_grid(1, j) = dist(rng);
    }
    return sys.lyapunov(s) / sys.state_norm_squared(s);
  };

  double lo = 1e300, hi = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const double r = sample_ratio();
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(lo > 0.0);
  // A second, differently-seeded sample stays inside the estimated band
  // with margin, evidencing fixed positive equivalence constants.
  rng.seed(18);
  for (int trial = 0; trial < 500; ++trial) {
    const double r = sample_ratio();
    CHECK(r >= 0.5 * lo);
    CHECK(r <= 2.0 * hi);
  }
}

TEST_CASE("moving-average of the stochastic loop tracks the averaged system") {
  // Short-delay comparison; the tracking band shrinks as omega grows.
  const Vector delays = vec2(1.0, 2.0);
  Matrix hessian = benchmark_hessian();
  StaticQuadraticMap map(5.0, vec2(0.0, 1.0), hessian);

  auto band_for_omega = [&](double omega) {
    DitherParams dither;
    dither.amplitudes = Vector::Constant(2, 0.22);
    dither.omega = omega;
    dither.phase = PhaseModel::Wiener;
    ControllerConfig ctrl;
    ctrl.mode = ControlMode::Predictor;
    ctrl.c = 20.0;
    ctrl.k_diag = Vector::Constant(2, 0.01);
    ctrl.washout_cutoff = 0.25;
    SimParams sim;
    sim.dt = 1e-3;
    sim.t_final = 150.0;
    sim.theta_hat0 = vec2(1.0, 0.0);
    sim.decimation = 100;  // records every 0.1
    ClosedLoop loop(map, dither, delays, ctrl, sim, 4);
    Trajectory traj = loop.run();

    AveragedSystem sys(hessian, ctrl.k_diag, ctrl.c, delays, 50, 0.02);
    AveragedRunResult avg = run_averaged(sys, vec2(1.0, -1.0), 150.0, 5);
    // Both record every 0.1 time units.
    REQUIRE(avg.t.size() == traj.size());

    // Centered moving average of theta_tilde = theta_hat - theta* over a
    // 4-time-unit window, compared after the initial washout transient.
    const int half_window = 20;
    double band = 0.0;
    for (std::size_t k = 200; k + half_window < traj.size(); ++k) {
      Vector mean = Vector::Zero(2);
      for (int j = -half_window; j <= half_window; ++j) {
        mean += traj.theta_hat[k + j] - map.theta_star();
      }
      mean /= 2.0 * half_window + 1.0;
      band = std::max(band, (mean - avg.theta_tilde[k]).norm());
    }
    return band;
  };

  const double band_slow = band_for_omega(5.0);
  const double band_fast = band_for_omega(25.0);
  CHECK(band_fast <= band_slow);
  CHECK(band_slow < 0.5);
}
