#include "toruskit/random.hpp"

#include <cmath>

namespace toruskit {

Mat Rng::normal_matrix(int rows, int cols) {
  Mat m(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = normal();
  return m;
}

CMat Rng::complex_normal_matrix(int rows, int cols) {
  CMat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal();
      const double im = normal();
      m(i, j) = cplx(re, im);
    }
  return m;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Mat haar_orthogonal(int n, Rng& rng) {
  const Mat a = rng.normal_matrix(n, n);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k)
    if (r(k, k) < 0) q.col(k) *= -1.0;
  return q;
}

Mat random_spd(int n, double max_condition, Rng& rng) {
  const Mat q = haar_orthogonal(n, rng);
  Vec d(n);
  const double span = std::log(max_condition);
  for (int k = 0; k < n; ++k) d(k) = std::exp(rng.uniform(0.0, span));
  return symmetrize(q * d.asDiagonal() * q.transpose());
}

}  // namespace toruskit
