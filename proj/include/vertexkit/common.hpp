#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace vertexkit {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat33 = Eigen::Matrix3cd;
using CMatX = Eigen::MatrixXcd;
using CVecX = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace vertexkit
