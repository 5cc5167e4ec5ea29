#include "sesc/dither.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sesc {

namespace {

void check_dimension(const Vector& eta, const DitherParams& params) {
  if (eta.size() != params.amplitudes.size()) {
    throw std::invalid_argument(
        "dither: phase vector has dimension " + std::to_string(eta.size()) +
        ", expected " + std::to_string(params.amplitudes.size()));
  }
}

}  // namespace

void DitherParams::validate() const {
  if (amplitudes.size() < 1) {
    throw std::invalid_argument("dither: needs at least one channel");
  }
  if (!(amplitudes.array() > 0.0).all()) {
    throw std::invalid_argument("dither: amplitudes must be > 0");
  }
  if (!(omega > 0.0)) {
    throw std::invalid_argument("dither: omega must be > 0");
  }
}

Vector phase_from_wiener(const Vector& wiener, const DitherParams& params) {
  const double base = params.omega * std::numbers::pi;
  Vector eta(wiener.size());
  switch (params.phase) {
    case PhaseModel::DoubleSine:
      for (Eigen::Index i = 0; i < wiener.size(); ++i) {
        eta[i] = base * (1.0 + std::sin(wiener[i]));
      }
      break;
    case PhaseModel::Wiener:
      for (Eigen::Index i = 0; i < wiener.size(); ++i) {
        eta[i] = base + wiener[i];
      }
      break;
  }
  return eta;
}

DitherState::DitherState(const DitherParams& params, std::uint64_t seed) {
  params.validate();
  const int n = params.dimension();
  wiener_ = Vector::Zero(n);
  eta_ = phase_from_wiener(wiener_, params);
  samplers_.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t s : split_seed(seed, n)) {
    samplers_.emplace_back(s);
  }
}

void DitherState::advance(const DitherParams& params, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("dither: dt must be > 0");
  }
  const double std_dev = std::sqrt(params.omega * dt);
  for (Eigen::Index i = 0; i < wiener_.size(); ++i) {
    wiener_[i] += std_dev * samplers_[static_cast<std::size_t>(i)]();
  }
  eta_ = phase_from_wiener(wiener_, params);
  t_ += dt;
}

Vector signal_S(const Vector& eta, const DitherParams& params) {
  check_dimension(eta, params);
  Vector s(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    s[i] = params.amplitudes[i] * std::sin(eta[i]);
  }
  return s;
}

Vector signal_M(const Vector& eta, const DitherParams& params) {
  check_dimension(eta, params);
  Vector m(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    m[i] = 2.0 / params.amplitudes[i] * std::sin(eta[i]);
  }
  return m;
}

Matrix signal_N(const Vector& eta, const DitherParams& params) {
  check_dimension(eta, params);
  const Eigen::Index n = eta.size();
  Vector sin_eta(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sin_eta[i] = std::sin(eta[i]);
  }
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ai = params.amplitudes[i];
    out(i, i) = 16.0 / (ai * ai) * (sin_eta[i] * sin_eta[i] - 0.5);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v =
          4.0 / (ai * params.amplitudes[j]) * sin_eta[i] * sin_eta[j];
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

}  // namespace sesc
