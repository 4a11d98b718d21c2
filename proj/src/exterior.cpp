#include "toruskit/exterior.hpp"

#include <algorithm>

#include "toruskit/errors.hpp"

namespace toruskit {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Subset> k_subsets(int dim, int k) {
  std::vector<Subset> out;
  if (k < 0 || k > dim) return out;
  Subset s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  while (true) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[i] == dim - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

int subset_rank(int dim, const Subset& s) {
  const int k = static_cast<int>(s.size());
  long long rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < s[i]; ++v) rank += binomial(dim - 1 - v, k - 1 - i);
    prev = s[i];
  }
  return static_cast<int>(rank);
}

namespace {

// Sorts in place; returns the permutation sign, or 0 on a repeated index.
int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return sign;
}

template <typename Scalar, typename Out, typename Get>
void fill_derivation(int dim, int k, const Get& a, Out& out) {
  const auto subsets = k_subsets(dim, k);
  for (std::size_t col = 0; col < subsets.size(); ++col) {
    const Subset& c = subsets[col];
    for (int i = 0; i < k; ++i)
      for (int t = 0; t < dim; ++t) {
        const Scalar entry = a(t, c[i]);
        if (entry == 0) continue;
        std::vector<int> idx = c;
        idx[i] = t;
        const int sign = sort_sign(idx);
        if (sign == 0) continue;
        const int row = subset_rank(dim, idx);
        if (sign > 0)
          out(row, static_cast<int>(col)) += entry;
        else
          out(row, static_cast<int>(col)) -= entry;
      }
  }
}

}  // namespace

MultiVector::MultiVector(int dim, int degree)
    : dim_(dim), degree_(degree), coeffs_(CVec::Zero(binomial(dim, degree))) {
  if (degree < 0 || degree > dim) throw InvalidInput("multivector degree out of range");
}

MultiVector::MultiVector(int dim, int degree, const CVec& coeffs)
    : dim_(dim), degree_(degree), coeffs_(coeffs) {
  if (degree < 0 || degree > dim) throw InvalidInput("multivector degree out of range");
  if (coeffs.size() != binomial(dim, degree)) throw InvalidInput("multivector coefficient count");
}

MultiVector MultiVector::basis(int dim, const std::vector<int>& indices) {
  const int k = static_cast<int>(indices.size());
  MultiVector out(dim, k);
  for (int i : indices)
    if (i < 0 || i >= dim) throw InvalidInput("multivector index out of range");
  std::vector<int> idx = indices;
  const int sign = sort_sign(idx);
  if (sign != 0) out.coeffs_(subset_rank(dim, idx)) = static_cast<double>(sign);
  return out;
}

MultiVector MultiVector::from_vector(const CVec& v) {
  return MultiVector(static_cast<int>(v.size()), 1, v);
}

MultiVector MultiVector::wedge(const MultiVector& other) const {
  if (dim_ != other.dim_) throw InvalidInput("wedge of multivectors of different dimension");
  if (degree_ + other.degree_ > dim_) throw InvalidInput("wedge degree exceeds dimension");
  MultiVector out(dim_, degree_ + other.degree_);
  const auto left = k_subsets(dim_, degree_);
  const auto right = k_subsets(dim_, other.degree_);
  for (std::size_t a = 0; a < left.size(); ++a) {
    if (coeffs_(a) == 0.0) continue;
    for (std::size_t b = 0; b < right.size(); ++b) {
      if (other.coeffs_(b) == 0.0) continue;
      std::vector<int> idx = left[a];
      idx.insert(idx.end(), right[b].begin(), right[b].end());
      const int sign = sort_sign(idx);
      if (sign == 0) continue;
      out.coeffs_(subset_rank(dim_, idx)) += static_cast<double>(sign) * coeffs_(a) * other.coeffs_(b);
    }
  }
  return out;
}

MultiVector MultiVector::operator+(const MultiVector& o) const {
  if (dim_ != o.dim_ || degree_ != o.degree_) throw InvalidInput("sum of mismatched multivectors");
  return MultiVector(dim_, degree_, coeffs_ + o.coeffs_);
}

MultiVector MultiVector::operator-(const MultiVector& o) const {
  if (dim_ != o.dim_ || degree_ != o.degree_) throw InvalidInput("difference of mismatched multivectors");
  return MultiVector(dim_, degree_, coeffs_ - o.coeffs_);
}

CMat compound_matrix(const CMat& a, int k) {
  const int dim = static_cast<int>(a.rows());
  const auto subsets = k_subsets(dim, k);
  const int m = static_cast<int>(subsets.size());
  CMat out(m, m);
  if (k == 0) {
    out(0, 0) = 1.0;
    return out;
  }
  CMat minor(k, k);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) minor(i, j) = a(subsets[r][i], subsets[c][j]);
      out(r, c) = minor.partialPivLu().determinant();
    }
  return out;
}

Mat derivation_matrix(const Mat& a, int k) {
  const int dim = static_cast<int>(a.rows());
  const int m = static_cast<int>(binomial(dim, k));
  Mat out = Mat::Zero(m, m);
  fill_derivation<double>(dim, k, [&](int i, int j) { return a(i, j); }, out);
  return out;
}

RationalMatrix derivation_matrix(const RationalMatrix& a, int k) {
  const int dim = a.rows();
  const int m = static_cast<int>(binomial(dim, k));
  RationalMatrix out(m, m);
  fill_derivation<Rational>(dim, k, [&](int i, int j) { return a(i, j); }, out);
  return out;
}

}  // namespace toruskit
