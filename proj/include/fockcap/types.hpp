#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fockcap {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Atomic units throughout.
inline constexpr double kHbar = 1.0;
inline constexpr Complex kI{0.0, 1.0};

// Spatial exchange symmetry of the two-body amplitude. The spin singlet has a
// symmetric spatial part, the triplet an antisymmetric one.
enum class Exchange : int { antisymmetric = -1, symmetric = +1 };

inline double sign_of(Exchange s) { return static_cast<double>(static_cast<int>(s)); }

} // namespace fockcap
