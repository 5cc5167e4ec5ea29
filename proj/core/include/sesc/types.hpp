#pragma once

#include <Eigen/Dense>

namespace sesc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace sesc
