#include "toruskit/rational.hpp"

#include <algorithm>

#include "toruskit/errors.hpp"

namespace toruskit {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw InvalidInput("empty rational literal");
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(text.substr(0, slash));
      BigInt den(text.substr(slash + 1));
      if (den == 0) throw InvalidInput("zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits == "-" || digits.empty()) digits += "0";
    BigInt den = 1;
    for (std::size_t k = dot + 1; k < text.size(); ++k) den *= 10;
    return Rational(BigInt(digits), den);
  } catch (const std::runtime_error&) {
    throw InvalidInput("malformed rational literal '" + text + "'");
  }
}

std::string format_rational(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_integers(const std::vector<std::vector<long long>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  RationalMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& other) const {
  RationalMatrix out(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& other) const {
  RationalMatrix out(*this);
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += other.data_[k];
  return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& other) const {
  RationalMatrix out(*this);
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] -= other.data_[k];
  return out;
}

RationalMatrix RationalMatrix::scaled(const Rational& s) const {
  RationalMatrix out(*this);
  for (auto& x : out.data_) x *= s;
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

bool RationalMatrix::operator==(const RationalMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(RationalMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int pivot = -1;
    for (int r = row; r < m.rows(); ++r)
      if (m(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(row, c));
    const Rational inv = 1 / m(row, col);
    for (int c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Rational f = m(r, col);
      for (int c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int RationalMatrix::rank() const {
  RationalMatrix copy(*this);
  return static_cast<int>(rref(copy).size());
}

RationalMatrix RationalMatrix::inverse() const {
  if (rows_ != cols_) throw InvalidInput("inverse of a non-square matrix");
  RationalMatrix aug = hstack(identity(rows_));
  const auto pivots = rref(aug);
  if (static_cast<int>(pivots.size()) < rows_ || pivots.back() >= rows_)
    throw DegenerateLattice("singular rational matrix");
  RationalMatrix out(rows_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < rows_; ++j) out(i, j) = aug(i, rows_ + j);
  return out;
}

RationalMatrix RationalMatrix::null_space() const {
  RationalMatrix m(*this);
  const auto pivots = rref(m);
  std::vector<int> free_cols;
  for (int c = 0, p = 0; c < cols_; ++c) {
    if (p < static_cast<int>(pivots.size()) && pivots[p] == c) {
      ++p;
      continue;
    }
    free_cols.push_back(c);
  }
  RationalMatrix basis(cols_, static_cast<int>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const int f = free_cols[k];
    basis(f, static_cast<int>(k)) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      basis(pivots[r], static_cast<int>(k)) = -m(static_cast<int>(r), f);
  }
  return basis;
}

RationalMatrix RationalMatrix::column(int c) const {
  RationalMatrix out(rows_, 1);
  for (int i = 0; i < rows_; ++i) out(i, 0) = (*this)(i, c);
  return out;
}

RationalMatrix RationalMatrix::hstack(const RationalMatrix& right) const {
  RationalMatrix out(rows_, cols_ + right.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    for (int j = 0; j < right.cols_; ++j) out(i, cols_ + j) = right(i, j);
  }
  return out;
}

RationalMatrix RationalMatrix::vstack(const RationalMatrix& below) const {
  RationalMatrix out(rows_ + below.rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
  for (int i = 0; i < below.rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(rows_ + i, j) = below(i, j);
  return out;
}

Mat RationalMatrix::to_double() const {
  Mat out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = static_cast<double>((*this)(i, j));
  return out;
}

std::vector<BigInt> primitive_integer_vector(const std::vector<Rational>& v) {
  BigInt lcm_den = 1;
  for (const auto& x : v) lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(x));
  std::vector<BigInt> out(v.size());
  BigInt g = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Rational scaled = v[k] * lcm_den;
    out[k] = boost::multiprecision::numerator(scaled);
    g = boost::multiprecision::gcd(g, out[k]);
  }
  if (g == 0) return out;
  int sign = 0;
  for (const auto& x : out)
    if (x != 0) {
      sign = x > 0 ? 1 : -1;
      break;
    }
  for (auto& x : out) x = x / g * sign;
  return out;
}

}  // namespace toruskit
