#pragma once

#include "toruskit/torus_core.hpp"

namespace toruskit {

/// A point of S: a g-isotropic frame of V^{0,1}.
class TwistorPoint {
 public:
  TwistorPoint(const IsotropicFrame& frame, const Metric& metric, double tol = 1e-10);
  static TwistorPoint from_structure(const ComplexStructure& j, const Metric& g);

  const IsotropicFrame& frame() const { return frame_; }
  const Metric& metric() const { return metric_; }
  int n() const { return frame_.n(); }
  ComplexStructure structure() const { return structure_from_frame(frame_); }
  /// F^H g F, the Hermitian Gram matrix of the frame.
  CMat gram() const;

 private:
  IsotropicFrame frame_;
  Metric metric_;
};

/// sigma_min([F_I | F_J]) > tol * sigma_max.
bool transversal(const TwistorPoint& i, const TwistorPoint& j, double tol = kDefaultTol);

/// Coordinates (in the frame of L) of the projection of v onto V^{0,1}_L
/// along V^{1,0}_L.
CVec kappa(const CVec& v, const TwistorPoint& l);
/// Frame-coordinates -> vector in V^{0,1}_L.
CVec lift(const CVec& w, const TwistorPoint& l);

/// The unique v with kappa_I(v) = w_i and kappa_J(v) = w_j. Throws
/// NotTransversal when V^{0,1}_I and V^{0,1}_J meet.
CVec section_solve(const TwistorPoint& i, const TwistorPoint& j, const CVec& w_i, const CVec& w_j);

/// Constant section through a real vector x.
CVec horizontal_section(const Vec& x);

/// kappa_L of the section through (0 at I) and (t at L').
CVec psi_transport(const TwistorPoint& i, const TwistorPoint& l, const TwistorPoint& l_prime,
                   const CVec& t);

/// The point -I: conjugate frame, same metric.
TwistorPoint conjugate_point(const TwistorPoint& s);

/// ||H xi + (H xi)^T|| / max(1, ||H xi||), H = gram(); zero for tangent vectors.
double skew_defect(const TwistorPoint& s, const CMat& xi);

/// <Theta(xi, conj xi) b, b> with Theta = -xi^* xi on the B- fiber. xi maps
/// B- coordinates (basis conj F) to B+ coordinates (basis F). Throws NotSkew.
double b_minus_curvature(const TwistorPoint& s, const CMat& xi, const CVec& b,
                         double tol = kDefaultTol);

/// Maximum of the curvature form over b of unit length in B-.
double max_b_minus_curvature(const TwistorPoint& s, const CMat& xi, double tol = kDefaultTol);

/// Complex dimension of the tangent space of S at s from the rank of the
/// linearized isotropy constraint.
int tangent_dimension(const TwistorPoint& s);

}  // namespace toruskit
