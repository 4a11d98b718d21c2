#pragma once

#include <cstdint>
#include <optional>

#include "toruskit/linalg.hpp"
#include "toruskit/rational.hpp"

namespace toruskit {

// Sign convention used throughout: V^{1,0} is the (+i)-eigenspace of J on
// V_C, V^{0,1} the (-i)-eigenspace, and a Hodge type (p,q) counts p factors
// from V^{1,0}.

enum class Backend { F64, Rational };

/// Real symmetric positive definite matrix on V_R = R^{2n}.
class Metric {
 public:
  explicit Metric(const Mat& g, double tol = kDefaultTol);
  static Metric identity(int dim) { return Metric(Mat::Identity(dim, dim)); }

  const Mat& matrix() const { return g_; }
  int dim() const { return static_cast<int>(g_.rows()); }
  double min_eigenvalue() const;

 private:
  Mat g_;
};

/// Real operator with J^2 = -Id.
class ComplexStructure {
 public:
  explicit ComplexStructure(const Mat& j, double tol = kDefaultTol);

  const Mat& matrix() const { return j_; }
  int dim() const { return static_cast<int>(j_.rows()); }
  int n() const { return dim() / 2; }

  /// ||J^T g J - g||_F / ||g||_F.
  double compatibility_residual(const Metric& g) const;
  bool compatible_with(const Metric& g, double tol = kDefaultTol) const {
    return compatibility_residual(g) <= tol;
  }
  /// ||J^2 + Id||_F.
  double square_residual() const;
  ComplexStructure negated() const { return ComplexStructure(-j_); }

 private:
  Mat j_;
};

/// Complex 2n x n matrix whose columns span V^{0,1}.
class IsotropicFrame {
 public:
  explicit IsotropicFrame(const CMat& basis, double tol = 1e-12);

  const CMat& basis() const { return basis_; }
  int n() const { return static_cast<int>(basis_.cols()); }
  int dim() const { return static_cast<int>(basis_.rows()); }

  /// ||B^T g B||_F / ||B^H g B||_F.
  double isotropy_residual(const Metric& g) const;
  IsotropicFrame conjugate() const { return IsotropicFrame(basis_.conjugate()); }

 private:
  CMat basis_;
};

struct ExactPeriods {
  RationalMatrix re;  // n x 2n
  RationalMatrix im;  // n x 2n
};

/// Period matrix of phi: Z^{2n} -> C^n; columns are the images of the
/// lattice generators.
class MarkedTorus {
 public:
  int n() const { return static_cast<int>(periods_.rows()); }
  Backend backend() const { return exact_ ? Backend::Rational : Backend::F64; }
  const CMat& periods() const { return periods_; }
  const std::optional<ExactPeriods>& exact() const { return exact_; }
  double condition_number() const { return condition_; }

  /// [Re P; Im P], the real 2n x 2n matrix of phi.
  Mat real_matrix() const;
  /// Complex structure on R^{2n} pulled back from multiplication by i.
  ComplexStructure induced_structure() const;
  /// Exact version; throws BackendRequired on a float torus.
  RationalMatrix exact_induced_structure() const;
  MarkedTorus as_float() const;

  friend MarkedTorus make_torus(const CMat& periods, double tol);
  friend MarkedTorus make_exact_torus(const RationalMatrix& re, const RationalMatrix& im);

 private:
  CMat periods_;
  std::optional<ExactPeriods> exact_;
  double condition_ = 0.0;
};

/// Validates a float period matrix. Throws DegenerateLattice when the
/// stacked real matrix has inverse condition below `tol`.
MarkedTorus make_torus(const CMat& periods, double tol = kDefaultTol);
MarkedTorus make_exact_torus(const RationalMatrix& re, const RationalMatrix& im);

/// [Id | i Id]: the lattice Z^n + i Z^n.
MarkedTorus standard_torus(int n);
MarkedTorus standard_exact_torus(int n);

/// The lattice Z^{2n} with complex coordinates given by the V^{1,0}
/// component in an eigenbasis of J.
MarkedTorus torus_from_structure(const ComplexStructure& j);

/// Complex Gaussian periods, redrawn until non-degenerate.
MarkedTorus random_torus(int n, std::uint64_t seed);
/// Normalized Gaussian-rational periods [Id | M], entries of M of the form
/// p/q + (r/s)i with |p|, |r| <= 3 and 1 <= q, s <= 3.
MarkedTorus random_exact_torus(int n, std::uint64_t seed);

/// Basis [conj(F) | F] of V_C adapted to J (no metric involved); F spans
/// V^{0,1}. Throws IllConditioned if the basis is near-singular.
CMat eigenbasis(const ComplexStructure& j);

/// Operator with (-i)-eigenspace span(F) and (+i)-eigenspace span(conj F).
ComplexStructure structure_from_frame(const IsotropicFrame& frame, double tol = 1e-12);

/// g-unitary frame of V^{0,1} (F^H g F = Id). Throws NotCompatible.
IsotropicFrame frame_from_structure(const ComplexStructure& j, const Metric& g,
                                    double tol = kDefaultTol);

/// Conjugates the standard structure by a Haar-random g-orthogonal matrix.
ComplexStructure random_structure(const Metric& g, std::uint64_t seed);

/// (Id + J^T J) / 2, a metric compatible with J.
Metric compatible_metric(const ComplexStructure& j);

/// Sign of the orientation (x_1, Jx_1, ..., x_n, Jx_n), x_k + i y_k a basis
/// of V^{1,0}, relative to that of J_0. For odd n, two g-compatible
/// structures can only be transversal when their orientations differ.
int orientation(const ComplexStructure& j);

/// J_0: e_k -> e_{k+n}, e_{k+n} -> -e_k.
ComplexStructure standard_structure(int n);

}  // namespace toruskit
