#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace modcomm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using IndexList = std::vector<int>;

const char* version() noexcept;

}  // namespace modcomm
