#include "toruskit/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace toruskit {

namespace {

struct GramSchmidt {
  LMat mu;
  LVec norms;  // squared norms of the orthogonalized rows
};

GramSchmidt orthogonalize(const LMat& b) {
  const int m = static_cast<int>(b.rows());
  GramSchmidt gs{LMat::Zero(m, m), LVec::Zero(m)};
  LMat star = b;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < i; ++j) {
      if (gs.norms(j) == 0) continue;
      gs.mu(i, j) = b.row(i).dot(star.row(j)) / gs.norms(j);
      star.row(i) -= gs.mu(i, j) * star.row(j);
    }
    gs.mu(i, i) = 1;
    gs.norms(i) = star.row(i).squaredNorm();
  }
  return gs;
}

}  // namespace

LMat lll_reduce(LMat b, long double delta) {
  const int m = static_cast<int>(b.rows());
  if (m < 2) return b;
  GramSchmidt gs = orthogonalize(b);
  int k = 1;
  for (long iter = 0; k < m && iter < 1000000; ++iter) {
    for (int j = k - 1; j >= 0; --j) {
      const long double q = std::round(gs.mu(k, j));
      if (q == 0) continue;
      b.row(k) -= q * b.row(j);
      for (int l = 0; l <= j; ++l) gs.mu(k, l) -= q * gs.mu(j, l);
    }
    const long double mu = gs.mu(k, k - 1);
    if (gs.norms(k) >= (delta - mu * mu) * gs.norms(k - 1)) {
      ++k;
    } else {
      b.row(k).swap(b.row(k - 1));
      gs = orthogonalize(b);
      k = std::max(k - 1, 1);
    }
  }
  return b;
}

std::vector<Eigen::VectorXd> integer_relations(const Eigen::MatrixXd& k, double scale,
                                               double rel_tol) {
  const int n = static_cast<int>(k.cols());
  const int r = static_cast<int>(k.rows());
  LMat basis = LMat::Zero(n, n + r);
  for (int j = 0; j < n; ++j) {
    basis(j, j) = 1;
    for (int i = 0; i < r; ++i) basis(j, n + i) = static_cast<long double>(scale) * k(i, j);
  }
  const LMat reduced = lll_reduce(basis);
  std::vector<Eigen::VectorXd> out;
  for (int row = 0; row < n; ++row) {
    const LVec w = reduced.row(row).head(n).transpose();
    const long double wn = w.norm();
    if (wn == 0) continue;
    const long double tail = reduced.row(row).tail(r).norm() / static_cast<long double>(scale);
    if (tail <= static_cast<long double>(rel_tol) * wn) out.push_back(w.cast<double>());
  }
  std::stable_sort(out.begin(), out.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.squaredNorm() < b.squaredNorm();
  });
  return out;
}

}  // namespace toruskit
