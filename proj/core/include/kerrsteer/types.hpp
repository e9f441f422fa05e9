#pragma once

#include <complex>

#include <Eigen/Core>

namespace kerrsteer {

using cplx = std::complex<double>;

// All 4-component objects use the basis (mode1, mode1+, mode2, mode2+).
using Vec4c = Eigen::Matrix<cplx, 4, 1>;
using Mat4c = Eigen::Matrix<cplx, 4, 4>;
using Mat4d = Eigen::Matrix<double, 4, 4>;

inline constexpr cplx kI{0.0, 1.0};

}  // namespace kerrsteer
