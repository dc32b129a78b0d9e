#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace bdris {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;

inline constexpr const char* kVersion = "0.1.0";

} // namespace bdris
