#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace cdis {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexMatrix = Matrix<Complex<Real>>;

template <typename Real>
using ComplexVector = Vector<Complex<Real>>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using MatrixXcd = ComplexMatrix<double>;
using VectorXcd = ComplexVector<double>;

template <typename Real>
inline constexpr Real pi_v = Real(3.141592653589793238462643383279502884L);

}  // namespace cdis
