#include "sesc/averaged.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sesc/metrics.hpp"

namespace sesc {

namespace {

// Symmetric eigendecomposition with a residual check on every pair.
Eigen::SelfAdjointEigenSolver<Matrix> checked_eigensolve(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("eigensolve failed to converge");
  }
  const double scale = std::max(1.0, a.norm());
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    const double residual =
        (a * eig.eigenvectors().col(k) -
         eig.eigenvalues()[k] * eig.eigenvectors().col(k))
            .norm();
    if (residual > 1e-10 * scale) {
      throw std::runtime_error("eigensolve residual above tolerance");
    }
  }
  return eig;
}

void require_negative_definite(const Matrix& hessian) {
  if (hessian.rows() != hessian.cols() || hessian.rows() < 1) {
    throw std::invalid_argument("hessian must be square");
  }
  if ((hessian - hessian.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("hessian must be symmetric");
  }
  const auto eig = checked_eigensolve(hessian);
  if (!(eig.eigenvalues().array() < 0.0).all()) {
    throw std::invalid_argument("hessian must be negative definite");
  }
}

}  // namespace

double critical_filter_gain(const Matrix& hessian, const Vector& gain_diag) {
  require_negative_definite(hessian);
  if (gain_diag.size() != hessian.rows()) {
    throw std::invalid_argument("gain dimension mismatch");
  }
  if (!(gain_diag.array() > 0.0).all()) {
    throw std::invalid_argument("gain entries must be > 0");
  }
  const Matrix k = gain_diag.asDiagonal();
  const Matrix hkhkh = hessian * k * hessian * k * hessian;
  const auto eig_hkhkh = checked_eigensolve(Matrix(-hkhkh));
  const auto eig_neg_h = checked_eigensolve(Matrix(-hessian));
  return 1.0 + eig_hkhkh.eigenvalues().maxCoeff() /
                   eig_neg_h.eigenvalues().minCoeff();
}

double critical_filter_gain(const Matrix& hessian, const Matrix& gain) {
  if (gain.rows() != gain.cols()) {
    throw std::invalid_argument("gain must be square");
  }
  for (Eigen::Index i = 0; i < gain.rows(); ++i) {
    for (Eigen::Index j = 0; j < gain.cols(); ++j) {
      if (i != j && std::abs(gain(i, j)) > 1e-12) {
        throw std::invalid_argument("gain must be diagonal");
      }
    }
  }
  return critical_filter_gain(hessian, Vector(gain.diagonal()));
}

AveragedSystem::AveragedSystem(Matrix hessian, Vector gain_diag, double c,
                               Vector delays, int grid_cells, double dt)
    : hessian_(std::move(hessian)),
      gain_diag_(std::move(gain_diag)),
      c_(c),
      delays_(std::move(delays)),
      m_(grid_cells),
      dt_(dt) {
  require_negative_definite(hessian_);
  const auto n = hessian_.rows();
  if (gain_diag_.size() != n || delays_.size() != n) {
    throw std::invalid_argument("averaged system: dimension mismatch");
  }
  if (!(gain_diag_.array() > 0.0).all()) {
    throw std::invalid_argument("averaged system: gains must be > 0");
  }
  if (!(c_ > 0.0)) {
    throw std::invalid_argument("averaged system: c must be > 0");
  }
  if (!(delays_.array() > 0.0).all()) {
    throw std::invalid_argument(
        "averaged system: every delay must be > 0 to form a transport channel");
  }
  if (m_ < 10) {
    throw std::invalid_argument("averaged system: grid_cells must be >= 10");
  }
  if (!(dt_ > 0.0)) {
    throw std::invalid_argument("averaged system: dt must be > 0");
  }
  const double cfl_limit = delays_.minCoeff() / static_cast<double>(m_);
  if (dt_ > cfl_limit * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "averaged system: CFL violation, need dt <= min(D)/m = " +
        std::to_string(cfl_limit));
  }
  if (c_ * dt_ >= 2.0) {
    throw std::invalid_argument(
        "averaged system: explicit Euler requires c*dt < 2");
  }
  lambda_min_neg_h_ =
      checked_eigensolve(Matrix(-hessian_)).eigenvalues().minCoeff();
  courant_ = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    courant_[i] = dt_ * static_cast<double>(m_) / delays_[i];
  }
}

AveragedSystem::State AveragedSystem::initial(const Vector& theta_tilde0) const {
  if (theta_tilde0.size() != hessian_.rows()) {
    throw std::invalid_argument("averaged system: theta_tilde0 dimension");
  }
  State s;
  s.theta_tilde = theta_tilde0;
  s.u_boundary = Vector::Zero(hessian_.rows());
  s.u_grid = Matrix::Zero(hessian_.rows(), m_ + 1);
  s.t = 0.0;
  return s;
}

Vector AveragedSystem::channel_integrals(const Matrix& u_grid) const {
  // integral_0^1 D_i u_i(x) dx by the trapezoid rule on the uniform grid.
  const auto n = u_grid.rows();
  const double h = 1.0 / static_cast<double>(m_);
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.5 * (u_grid(i, 0) + u_grid(i, m_));
    for (int j = 1; j < m_; ++j) {
      acc += u_grid(i, j);
    }
    out[i] = delays_[i] * h * acc;
  }
  return out;
}

void AveragedSystem::step(State& state) const {
  const auto n = hessian_.rows();

  const Vector integrals = channel_integrals(state.u_grid);
  const Vector theta_dot = state.u_grid.col(0);
  const Vector drive = hessian_ * (state.theta_tilde + integrals);
  Vector u_boundary_dot(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    u_boundary_dot[i] = -c_ * state.u_boundary[i] +
                        c_ * gain_diag_[i] * drive[i];
  }

  // Upwind sweep toward x = 0; ascending j only reads old u(j+1).
  for (Eigen::Index i = 0; i < n; ++i) {
    const double nu = courant_[i];
    for (int j = 0; j < m_; ++j) {
      state.u_grid(i, j) += nu * (state.u_grid(i, j + 1) - state.u_grid(i, j));
    }
  }

  state.theta_tilde += dt_ * theta_dot;
  state.u_boundary += dt_ * u_boundary_dot;
  state.u_grid.col(m_) = state.u_boundary;  // inflow boundary u(1, t) = U(t)
  state.t += dt_;
}

Vector AveragedSystem::reduction_transform(const State& state) const {
  return hessian_ * (state.theta_tilde + channel_integrals(state.u_grid));
}

Vector AveragedSystem::auxiliary_control(const State& state) const {
  return state.u_boundary - gain_diag_.cwiseProduct(reduction_transform(state));
}

double AveragedSystem::lyapunov(const State& state) const {
  const Vector v = reduction_transform(state);
  const Vector w = state.u_boundary - gain_diag_.cwiseProduct(v);

  const double h = 1.0 / static_cast<double>(m_);
  double weighted = 0.0;
  for (Eigen::Index i = 0; i < state.u_grid.rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j <= m_; ++j) {
      const double x = h * static_cast<double>(j);
      const double wq = (j == 0 || j == m_) ? 0.5 : 1.0;
      const double ux = state.u_grid(i, j);
      acc += wq * (1.0 + x) * ux * ux;
    }
    weighted += delays_[i] * h * acc;
  }

  return v.dot(gain_diag_.cwiseProduct(v)) +
         0.25 * lambda_min_neg_h_ * weighted + 0.5 * w.dot(-hessian_ * w);
}

double AveragedSystem::state_norm_squared(const State& state) const {
  const double h = 1.0 / static_cast<double>(m_);
  double l2 = 0.0;
  for (Eigen::Index i = 0; i < state.u_grid.rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j <= m_; ++j) {
      const double wq = (j == 0 || j == m_) ? 0.5 : 1.0;
      acc += wq * state.u_grid(i, j) * state.u_grid(i, j);
    }
    l2 += h * acc;
  }
  const Vector w = auxiliary_control(state);
  return state.theta_tilde.squaredNorm() + l2 + w.squaredNorm();
}

AveragedRunResult run_averaged(const AveragedSystem& system,
                               const Vector& theta_tilde0, double t_final,
                               int decimation) {
  if (!(t_final >= 0.0)) {
    throw std::invalid_argument("run_averaged: t_final must be >= 0");
  }
  if (decimation < 1) {
    throw std::invalid_argument("run_averaged: decimation must be >= 1");
  }
  AveragedSystem::State state = system.initial(theta_tilde0);
  AveragedRunResult result;

  const auto steps =
      static_cast<long long>(std::llround(t_final / system.dt()));
  const auto expected = static_cast<std::size_t>(steps / decimation) + 1;
  result.t.reserve(expected);
  result.theta_tilde.reserve(expected);
  result.u_boundary.reserve(expected);
  result.lyapunov.reserve(expected);
  result.norm_psi.reserve(expected);

  auto record = [&] {
    result.t.push_back(state.t);
    result.theta_tilde.push_back(state.theta_tilde);
    result.u_boundary.push_back(state.u_boundary);
    result.lyapunov.push_back(system.lyapunov(state));

    // Psi = sum_i theta_tilde_i^2 + integral over [t-D_i, t] of U_i^2 + U_i^2;
    // the window integral equals integral_0^1 D_i u_i(x)^2 dx on the grid.
    const double h = 1.0 / static_cast<double>(system.grid_cells());
    double psi = state.theta_tilde.squaredNorm() +
                 state.u_boundary.squaredNorm();
    for (Eigen::Index i = 0; i < state.u_grid.rows(); ++i) {
      double acc = 0.0;
      for (int j = 0; j <= system.grid_cells(); ++j) {
        const double wq = (j == 0 || j == system.grid_cells()) ? 0.5 : 1.0;
        acc += wq * state.u_grid(i, j) * state.u_grid(i, j);
      }
      psi += system.delays()[i] * h * acc;
    }
    result.norm_psi.push_back(psi);
  };

  record();
  for (long long k = 1; k <= steps; ++k) {
    system.step(state);
    if (k % decimation == 0) {
      record();
    }
  }

  result.initial_lyapunov = result.lyapunov.front();
  for (std::size_t k = 1; k < result.lyapunov.size(); ++k) {
    result.max_step_increase = std::max(
        result.max_step_increase, result.lyapunov[k] - result.lyapunov[k - 1]);
  }
  const std::size_t half = result.t.size() / 2;
  result.fitted_decay_rate =
      fit_log_slope(std::span(result.t).subspan(half),
                    std::span(result.lyapunov).subspan(half));
  return result;
}

}  // namespace sesc
