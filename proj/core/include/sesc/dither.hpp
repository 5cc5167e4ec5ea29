#pragma once

#include <cstdint>
#include <vector>

#include "sesc/rng.hpp"
#include "sesc/types.hpp"

namespace sesc {

// Two ways to turn a per-channel Wiener path W_i (run at scaled time omega*t)
// into a dither phase eta_i:
//
//   DoubleSine:  eta_i = omega*pi*(1 + sin(W_i)), bounded in [0, 2*omega*pi].
//   Wiener:      eta_i = omega*pi + W_i, the plain circle-Wiener phase.
//
// Both are ergodic.  They differ in the invariant distribution of eta mod
// 2*pi: under Wiener it is exactly uniform, so the long-run averages of
// sin(eta), sin^2(eta), sin^4(eta) equal the uniform-phase moments (0, 1/2,
// 3/8) that the demodulation constants below assume.  Under DoubleSine the
// sin^2 average is (1 - J0(2*omega*pi))/2, which approaches 1/2 only as omega
// grows; at omega = 5 the gap is ~0.05 and the Hessian demodulation picks up
// a bias proportional to the output's DC level.  Closed-loop scenarios
// therefore default to Wiener, while DoubleSine remains available and is the
// construction exercised by the ergodicity tests.
enum class PhaseModel { DoubleSine, Wiener };

struct DitherParams {
  Vector amplitudes;  // a_i, strictly positive
  double omega = 0.0; // dither frequency, > 0
  PhaseModel phase = PhaseModel::DoubleSine;

  int dimension() const { return static_cast<int>(amplitudes.size()); }
  // Throws std::invalid_argument on nonpositive amplitudes or omega.
  void validate() const;
};

// Phase vector from the current Wiener values.
Vector phase_from_wiener(const Vector& wiener, const DitherParams& params);

// Per-channel Wiener paths plus the derived phases.  Channels use mutually
// independent increment streams split from one master seed.
class DitherState {
 public:
  DitherState(const DitherParams& params, std::uint64_t seed);

  // One Euler-Maruyama step: each W_i gains an independent N(0, omega*dt)
  // increment and eta is recomputed.  Throws std::invalid_argument on dt <= 0.
  void advance(const DitherParams& params, double dt);

  const Vector& wiener() const { return wiener_; }
  const Vector& eta() const { return eta_; }
  double time() const { return t_; }

 private:
  Vector wiener_;
  Vector eta_;
  double t_ = 0.0;
  std::vector<NormalSampler> samplers_;
};

// Additive perturbation S(eta) = [a_i sin(eta_i)].
Vector signal_S(const Vector& eta, const DitherParams& params);

// Gradient demodulation M(eta) = [(2/a_i) sin(eta_i)].
Vector signal_M(const Vector& eta, const DitherParams& params);

// Hessian demodulation N(eta):
//   N_ii = (16/a_i^2) (sin^2(eta_i) - 1/2)
//   N_ij = (4/(a_i a_j)) sin(eta_i) sin(eta_j),  i != j
// Symmetric by construction.
Matrix signal_N(const Vector& eta, const DitherParams& params);

}  // namespace sesc
