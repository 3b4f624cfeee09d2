#pragma once

#include <Eigen/Dense>
#include <complex>

namespace thermokin {

using Vec  = Eigen::VectorXd;
using Mat  = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using Cplx = std::complex<double>;
using Eigen::Index;

} // namespace thermokin
