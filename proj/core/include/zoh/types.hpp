#pragma once

#include <Eigen/Dense>

namespace zoh {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace zoh
