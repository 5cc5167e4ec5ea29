#pragma once

#include <vector>

#include "sesc/types.hpp"

namespace sesc {

// Sufficient filter-gain threshold for exponential stability of the averaged
// closed loop:
//   c* = 1 + lambda_max(-H K H K H) / lambda_min(-H).
// H must be symmetric negative definite, K diagonal with positive entries.
double critical_filter_gain(const Matrix& hessian, const Matrix& gain);
double critical_filter_gain(const Matrix& hessian, const Vector& gain_diag);

// Deterministic averaged closed loop with the delays represented as unit-
// interval transport channels:
//   theta_tilde' = u(0, t)
//   u_t = D^{ -1 } u_x on x in (0, 1),  u(1, t) = U(t)
//   U' = -c U + c K H (theta_tilde + integral_0^1 D u(x, t) dx)
// discretized by first-order upwind in x (information flows from the x = 1
// boundary toward x = 0) and explicit Euler in t on m+1 uniform nodes.
class AveragedSystem {
 public:
  struct State {
    Vector theta_tilde;
    Vector u_boundary;  // U(t)
    Matrix u_grid;      // n x (m+1), column j holds u(x_j), x_j = j/m
    double t = 0.0;
  };

  // Requires every delay > 0, the CFL bound dt <= min(D)/m, and c*dt < 2
  // (explicit Euler stability of the filter).  Throws std::invalid_argument.
  AveragedSystem(Matrix hessian, Vector gain_diag, double c, Vector delays,
                 int grid_cells, double dt);

  State initial(const Vector& theta_tilde0) const;

  void step(State& state) const;

  // Reduction transform: H (theta_tilde + integral_0^1 D u dx).
  Vector reduction_transform(const State& state) const;

  // Filter mismatch U - K * reduction_transform.
  Vector auxiliary_control(const State& state) const;

  // Lyapunov functional
  //   V = v^T K v + 1/4 lambda_min(-H) integral (1+x) u^T D u dx
  //       + 1/2 w^T (-H) w
  // with v the reduction transform and w the auxiliary control.
  double lyapunov(const State& state) const;

  // V is equivalent to |theta_tilde|^2 + integral |u|^2 + |w|^2 up to fixed
  // positive constants; this is the norm expression used to check that.
  double state_norm_squared(const State& state) const;

  double dt() const { return dt_; }
  int grid_cells() const { return m_; }
  double c() const { return c_; }
  const Matrix& hessian() const { return hessian_; }
  const Vector& delays() const { return delays_; }

 private:
  Vector channel_integrals(const Matrix& u_grid) const;

  Matrix hessian_;
  Vector gain_diag_;
  double c_;
  Vector delays_;
  int m_;
  double dt_;
  double lambda_min_neg_h_;
  Vector courant_;  // dt * m / D_i per channel
};

struct AveragedRunResult {
  std::vector<double> t;
  std::vector<Vector> theta_tilde;
  std::vector<Vector> u_boundary;
  std::vector<double> lyapunov;
  std::vector<double> norm_psi;  // |theta_tilde|^2 + window integrals of U^2 + |U|^2
  double fitted_decay_rate = 0.0;   // slope of log V over the second half
  double max_step_increase = 0.0;   // max V(t_{k+1}) - V(t_k) over records
  double initial_lyapunov = 0.0;
};

AveragedRunResult run_averaged(const AveragedSystem& system,
                               const Vector& theta_tilde0, double t_final,
                               int decimation);

}  // namespace sesc
