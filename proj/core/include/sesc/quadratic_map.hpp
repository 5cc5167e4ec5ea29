#pragma once

#include "sesc/types.hpp"

namespace sesc {

// Static quadratic map Q(theta) = y* + 1/2 (theta - theta*)^T H (theta - theta*)
// with a sign-definite Hessian H.  H negative definite makes theta* a maximum,
// positive definite a minimum.  Immutable after construction and safe to share
// read-only across concurrent runs.
class StaticQuadraticMap {
 public:
  // Throws std::invalid_argument if hessian is not square/symmetric,
  // dimensions disagree, or the Hessian is not strictly sign-definite.
  StaticQuadraticMap(double y_star, Vector theta_star, Matrix hessian);

  double evaluate(const Vector& theta) const;

  // Gradient of the map at theta: H (theta - theta*).
  Vector true_gradient(const Vector& theta) const;

  double y_star() const { return y_star_; }
  const Vector& theta_star() const { return theta_star_; }
  const Matrix& hessian() const { return hessian_; }
  int dimension() const { return static_cast<int>(theta_star_.size()); }
  bool is_maximum() const { return is_maximum_; }

 private:
  void check_dimension(const Vector& theta) const;

  double y_star_;
  Vector theta_star_;
  Matrix hessian_;
  bool is_maximum_;
};

}  // namespace sesc
