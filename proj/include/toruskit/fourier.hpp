#pragma once

#include <map>
#include <vector>

#include "toruskit/errors.hpp"
#include "toruskit/exterior.hpp"
#include "toruskit/torus_core.hpp"

namespace toruskit {

/// Frame of V^{0,1}_J used for form coefficients: g-unitary for the
/// compatible metric of J.
CMat reference_frame(const ComplexStructure& j);

using Mode = std::vector<int>;  // m in Z^{2n}

/// Truncated (0,q)-form with End(C^R) coefficients:
/// sum_m e^{2 pi i m.x} sum_S dzbar_S (x) C_{m,S}, S over k_subsets(n, q).
/// Only modes present in the map are nonzero.
struct FourierForm {
  int n = 0;
  int degree = 0;
  int rank = 0;
  std::map<Mode, std::vector<CMat>> modes;

  FourierForm() = default;
  FourierForm(int n_, int degree_, int rank_) : n(n_), degree(degree_), rank(rank_) {}

  /// Adds c to the coefficient of e^{2 pi i m.x} dzbar_S, S increasing.
  void add(const Mode& m, const Subset& s, const CMat& c);
  CMat coefficient(const Mode& m, const Subset& s) const;
  double norm() const;
  FourierForm operator+(const FourierForm& o) const;
  FourierForm operator*(cplx s) const;
};

/// Untwisted Dolbeault complex on the flat torus, truncated to |m_k| <= M.
/// dzbar_a is dual to column a of the reference frame, and the L2 product
/// makes {dzbar_S} orthonormal, so per mode dbar is wedge with
/// c(m) = 2 pi i F^T m, dbar^* is contraction with conj c(m) and the
/// Laplacian is |c(m)|^2.
class FourierFormSpace {
 public:
  FourierFormSpace(const ComplexStructure& j, int mode_bound);

  int n() const { return n_; }
  int mode_bound() const { return mode_bound_; }
  const CMat& frame() const { return frame_; }
  CVec symbol(const Mode& m) const;
  bool in_range(const Mode& m) const;

  FourierForm dbar(const FourierForm& f) const;
  FourierForm dbar_adjoint(const FourierForm& f) const;
  /// dbar^* Laplacian^{-1} on nonzero modes, 0 on the zero mode.
  FourierForm green(const FourierForm& f) const;
  /// Zero-mode part: the harmonic projection for trivial twist.
  FourierForm harmonic(const FourierForm& f) const;
  /// (alpha (x) A) ^ (beta (x) B) = alpha ^ beta (x) AB, modes added and
  /// truncated to the cube.
  FourierForm wedge(const FourierForm& a, const FourierForm& b) const;

 private:
  int n_;
  int mode_bound_;
  CMat frame_;
};

struct MasseyOptions {
  double tol = 1e-12;
  int max_terms = 50;
};

struct MasseyResult {
  FourierForm theta;               // sum of theta_i
  std::vector<FourierForm> terms;  // theta_0, theta_1, ...
  double mc_residual = 0.0;        // ||dbar theta + 1/2 theta ^ theta||
  bool converged = false;
};

/// theta_k = -1/2 G sum_{i+j=k-1} theta_i ^ theta_j. Requires dbar theta_0 = 0
/// (NotClosed). Throws Obstructed when the harmonic part of a sum exceeds
/// tol, Diverged when the partial sum exceeds 1e6 ||theta_0||.
MasseyResult massey_solve(const FourierFormSpace& space, const FourierForm& theta0,
                          const MasseyOptions& opts = {});

}  // namespace toruskit
