#pragma once

#include <Eigen/Core>

namespace ltcn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

} // namespace ltcn
