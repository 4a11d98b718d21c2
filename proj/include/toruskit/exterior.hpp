#pragma once

#include <vector>

#include "toruskit/linalg.hpp"
#include "toruskit/rational.hpp"

namespace toruskit {

using Subset = std::vector<int>;

long long binomial(int n, int k);

/// All k-subsets of {0..dim-1}, lexicographically ordered. This ordering
/// indexes the standard basis e_S of Lambda^k.
std::vector<Subset> k_subsets(int dim, int k);
/// Position of a strictly increasing subset in that order.
int subset_rank(int dim, const Subset& s);

/// Element of Lambda^k(C^dim) in the basis e_{s_1} ^ ... ^ e_{s_k}.
class MultiVector {
 public:
  MultiVector(int dim, int degree);
  MultiVector(int dim, int degree, const CVec& coeffs);

  /// e_{i_1} ^ ... ^ e_{i_k} for arbitrary (0-based) indices; repeated
  /// indices give zero and unsorted ones pick up the permutation sign.
  static MultiVector basis(int dim, const std::vector<int>& indices);
  static MultiVector from_vector(const CVec& v);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const CVec& coeffs() const { return coeffs_; }
  cplx coeff(const Subset& s) const { return coeffs_(subset_rank(dim_, s)); }
  double norm() const { return coeffs_.norm(); }

  MultiVector wedge(const MultiVector& other) const;
  MultiVector conj() const { return MultiVector(dim_, degree_, coeffs_.conjugate()); }
  MultiVector operator+(const MultiVector& o) const;
  MultiVector operator-(const MultiVector& o) const;
  MultiVector operator*(cplx s) const { return MultiVector(dim_, degree_, coeffs_ * s); }

 private:
  int dim_;
  int degree_;
  CVec coeffs_;
};

/// Lambda^k(A): the matrix of k x k minors, rows and columns in subset order.
CMat compound_matrix(const CMat& a, int k);

/// Matrix of the derivation extension X -> sum_i v_1 ^ .. ^ A v_i ^ .. ^ v_k.
Mat derivation_matrix(const Mat& a, int k);
RationalMatrix derivation_matrix(const RationalMatrix& a, int k);

}  // namespace toruskit
