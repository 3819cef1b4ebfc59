#pragma once

#include <Eigen/Dense>

#include <vector>

namespace funk {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Third-order tensor stored as slices: t[k](i, j).
using Tensor3 = std::vector<Mat>;

// Value, gradient and Hessian of a scalar function at one point.
struct Jet {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

}  // namespace funk
