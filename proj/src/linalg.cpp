#include "toruskit/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace toruskit {

Mat standard_complex_structure(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.block(0, n, n, n) = -Mat::Identity(n, n);
  j.block(n, 0, n, n) = Mat::Identity(n, n);
  return j;
}

double relative_residual(const Mat& a, const Mat& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

double inverse_condition(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

double inverse_condition(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

namespace {

template <typename M>
int rank_impl(const M& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<M> svd(a);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

}  // namespace

int numerical_rank(const CMat& a, double rel_tol) { return rank_impl(a, rel_tol); }
int numerical_rank(const Mat& a, double rel_tol) { return rank_impl(a, rel_tol); }

CMat orthonormal_basis(const CMat& a, double rel_tol) {
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(0) > 0.0 && s(i) > rel_tol * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

double max_principal_angle(const CMat& a, const CMat& b) {
  const CMat qa = orthonormal_basis(a);
  const CMat qb = orthonormal_basis(b);
  if (qa.cols() != qb.cols()) return M_PI / 2;
  const CMat residual = qb - qa * (qa.adjoint() * qb);
  Eigen::JacobiSVD<CMat> svd(residual);
  const double s = std::min(1.0, svd.singularValues()(0));
  return std::asin(s);
}

Mat null_space(const Mat& a, double rel_tol) {
  const int cols = static_cast<int>(a.cols());
  if (a.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(0) > 0.0 && s(i) > rel_tol * s(0)) ++r;
  return svd.matrixV().rightCols(cols - r);
}

Mat spd_sqrt(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(a));
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

Mat spd_inv_sqrt(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(a));
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace toruskit
