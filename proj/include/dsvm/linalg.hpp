#pragma once

#include <Eigen/Dense>

namespace dsvm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using NodeId = int;

}  // namespace dsvm
