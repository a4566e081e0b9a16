#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace randop {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Site index into a LatticeBox ordering.
using SiteIndex = std::int64_t;

}  // namespace randop
