#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "toruskit/linalg.hpp"

namespace toruskit {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p", "p/q" or a decimal literal such as "-0.25" exactly.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

/// Dense row-major matrix over Q. Sizes here never exceed a few dozen, so
/// the naive cubic algorithms are what we want.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(int n);
  static RationalMatrix from_integers(const std::vector<std::vector<long long>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& operator()(int r, int c) { return data_[r * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return data_[r * cols_ + c]; }

  RationalMatrix operator*(const RationalMatrix& other) const;
  RationalMatrix operator+(const RationalMatrix& other) const;
  RationalMatrix operator-(const RationalMatrix& other) const;
  RationalMatrix scaled(const Rational& s) const;
  RationalMatrix transpose() const;
  bool operator==(const RationalMatrix& other) const;

  bool is_zero() const;
  int rank() const;
  /// Throws DegenerateLattice when singular.
  RationalMatrix inverse() const;
  /// Basis of the right null space, one column per basis vector.
  RationalMatrix null_space() const;
  RationalMatrix column(int c) const;
  RationalMatrix hstack(const RationalMatrix& right) const;
  RationalMatrix vstack(const RationalMatrix& below) const;

  Mat to_double() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

/// Scales a rational column vector to the primitive integer vector on the
/// same ray (positive leading nonzero entry).
std::vector<BigInt> primitive_integer_vector(const std::vector<Rational>& v);

}  // namespace toruskit
