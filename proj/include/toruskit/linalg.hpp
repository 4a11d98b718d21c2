#pragma once

#include <complex>

#include <Eigen/Dense>

namespace toruskit {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Default relative tolerance for matrix identity checks.
inline constexpr double kDefaultTol = 1e-9;

/// Multiplication by i on C^n written in (real parts, imaginary parts)
/// coordinates of R^{2n}: the block matrix [[0, -I], [I, 0]].
Mat standard_complex_structure(int n);

/// ||A - B||_F / max(1, ||B||_F).
double relative_residual(const Mat& a, const Mat& b);

/// Smallest / largest singular value; 0 for an empty or zero matrix.
double inverse_condition(const CMat& a);
double inverse_condition(const Mat& a);

/// Numerical rank with singular values above `rel_tol * sigma_max`.
int numerical_rank(const CMat& a, double rel_tol);
int numerical_rank(const Mat& a, double rel_tol);

/// Orthonormal basis (Euclidean/Hermitian) of the column space.
CMat orthonormal_basis(const CMat& a, double rel_tol = 1e-12);

/// Largest principal angle between the column spans of `a` and `b`, both
/// assumed to have the same dimension. Uses the sine formulation so small
/// angles keep full relative accuracy.
double max_principal_angle(const CMat& a, const CMat& b);

/// Orthonormal basis of the right null space, from an SVD.
Mat null_space(const Mat& a, double rel_tol);

/// Symmetric positive definite square root and inverse square root.
Mat spd_sqrt(const Mat& a);
Mat spd_inv_sqrt(const Mat& a);

inline Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }

}  // namespace toruskit
