#include "sesc/quadratic_map.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sesc {

namespace {
constexpr double kSymmetryTol = 1e-12;
}

StaticQuadraticMap::StaticQuadraticMap(double y_star, Vector theta_star,
                                       Matrix hessian)
    : y_star_(y_star),
      theta_star_(std::move(theta_star)),
      hessian_(std::move(hessian)),
      is_maximum_(false) {
  const auto n = theta_star_.size();
  if (n < 1) {
    throw std::invalid_argument("quadratic map: dimension must be >= 1");
  }
  if (hessian_.rows() != n || hessian_.cols() != n) {
    throw std::invalid_argument(
        "quadratic map: hessian must be " + std::to_string(n) + "x" +
        std::to_string(n));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(hessian_(i, j) - hessian_(j, i)) > kSymmetryTol) {
        throw std::invalid_argument("quadratic map: hessian is not symmetric");
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hessian_);
  const Vector& ev = eig.eigenvalues();
  const bool all_negative = (ev.array() < 0.0).all();
  const bool all_positive = (ev.array() > 0.0).all();
  if (!all_negative && !all_positive) {
    throw std::invalid_argument(
        "quadratic map: hessian must be strictly sign-definite");
  }
  is_maximum_ = all_negative;
}

void StaticQuadraticMap::check_dimension(const Vector& theta) const {
  if (theta.size() != theta_star_.size()) {
    throw std::invalid_argument(
        "quadratic map: input has dimension " + std::to_string(theta.size()) +
        ", expected " + std::to_string(theta_star_.size()));
  }
}

double StaticQuadraticMap::evaluate(const Vector& theta) const {
  check_dimension(theta);
  const Vector d = theta - theta_star_;
  return y_star_ + 0.5 * d.dot(hessian_ * d);
}

Vector StaticQuadraticMap::true_gradient(const Vector& theta) const {
  check_dimension(theta);
  return hessian_ * (theta - theta_star_);
}

}  // namespace sesc
