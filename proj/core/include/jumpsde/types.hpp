#pragma once

#include <Eigen/Dense>

namespace jumpsde {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace jumpsde
