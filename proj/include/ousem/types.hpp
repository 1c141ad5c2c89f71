#pragma once

#include <Eigen/Dense>

namespace ousem {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

} // namespace ousem
