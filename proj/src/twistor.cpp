#include "toruskit/twistor.hpp"

#include <string>

#include "toruskit/errors.hpp"

namespace toruskit {

namespace {

CMat metric_c(const TwistorPoint& s) { return s.metric().matrix().cast<cplx>(); }

// Rows: the linear functional kappa_L on V_C.
CMat kappa_matrix(const TwistorPoint& l) {
  const CMat& f = l.frame().basis();
  const CMat fg = f.adjoint() * metric_c(l);
  return l.gram().ldlt().solve(fg);
}

}  // namespace

TwistorPoint::TwistorPoint(const IsotropicFrame& frame, const Metric& metric, double tol)
    : frame_(frame), metric_(metric) {
  if (frame.dim() != metric.dim()) throw InvalidInput("frame and metric dimensions differ");
  const double res = frame.isotropy_residual(metric);
  if (res > tol) throw NotCompatible("frame is not isotropic (residual " + std::to_string(res) + ")");
}

TwistorPoint TwistorPoint::from_structure(const ComplexStructure& j, const Metric& g) {
  return TwistorPoint(frame_from_structure(j, g), g);
}

CMat TwistorPoint::gram() const {
  const CMat& f = frame_.basis();
  const CMat h = f.adjoint() * metric_.matrix().cast<cplx>() * f;
  return 0.5 * (h + h.adjoint());
}

bool transversal(const TwistorPoint& i, const TwistorPoint& j, double tol) {
  CMat both(i.frame().dim(), i.n() + j.n());
  both << i.frame().basis(), j.frame().basis();
  return inverse_condition(both) > tol;
}

CVec kappa(const CVec& v, const TwistorPoint& l) {
  if (v.size() != l.frame().dim()) throw InvalidInput("section vector has wrong length");
  return kappa_matrix(l) * v;
}

CVec lift(const CVec& w, const TwistorPoint& l) {
  if (w.size() != l.n()) throw InvalidInput("fiber value has wrong length");
  return l.frame().basis() * w;
}

CVec section_solve(const TwistorPoint& i, const TwistorPoint& j, const CVec& w_i, const CVec& w_j) {
  if (w_i.size() != i.n() || w_j.size() != j.n()) throw InvalidInput("fiber value has wrong length");
  if (!transversal(i, j)) throw NotTransversal("V^{0,1} spaces of the two points intersect");
  const int n = i.n();
  CMat a(2 * n, 2 * n);
  a << kappa_matrix(i), kappa_matrix(j);
  CVec rhs(2 * n);
  rhs << w_i, w_j;
  return a.partialPivLu().solve(rhs);
}

CVec horizontal_section(const Vec& x) { return x.cast<cplx>(); }

CVec psi_transport(const TwistorPoint& i, const TwistorPoint& l, const TwistorPoint& l_prime,
                   const CVec& t) {
  const CVec v = section_solve(i, l_prime, CVec::Zero(i.n()), t);
  return kappa(v, l);
}

TwistorPoint conjugate_point(const TwistorPoint& s) {
  return TwistorPoint(s.frame().conjugate(), s.metric());
}

double skew_defect(const TwistorPoint& s, const CMat& xi) {
  if (xi.rows() != s.n() || xi.cols() != s.n()) throw InvalidInput("tangent matrix must be n x n");
  const CMat hx = s.gram() * xi;
  return (hx + hx.transpose()).norm() / std::max(1.0, hx.norm());
}

double b_minus_curvature(const TwistorPoint& s, const CMat& xi, const CVec& b, double tol) {
  const double defect = skew_defect(s, xi);
  if (defect > tol) throw NotSkew("tangent constraint violated (defect " + std::to_string(defect) + ")");
  if (b.size() != s.n()) throw InvalidInput("B- vector has wrong length");
  // B+ carries H = F^H g F, B- (basis conj F) carries conj(H); the adjoint
  // of xi is conj(H)^{-1} xi^H H.
  const CMat h = s.gram();
  const CMat h_minus = h.conjugate();
  const CMat adjoint = h_minus.ldlt().solve(xi.adjoint() * h);
  const CVec theta_b = -(adjoint * (xi * b));
  return (b.adjoint() * h_minus * theta_b)(0, 0).real();
}

double max_b_minus_curvature(const TwistorPoint& s, const CMat& xi, double tol) {
  const double defect = skew_defect(s, xi);
  if (defect > tol) throw NotSkew("tangent constraint violated (defect " + std::to_string(defect) + ")");
  const CMat h = s.gram();
  const CMat a = xi.adjoint() * h * xi;
  Eigen::GeneralizedSelfAdjointEigenSolver<CMat> es(0.5 * (a + a.adjoint()), h.conjugate());
  return -es.eigenvalues()(0);
}

int tangent_dimension(const TwistorPoint& s) {
  const int n = s.n();
  const CMat h = s.gram();
  // Matrix of xi -> H xi + (H xi)^T on column-major vec(xi).
  CMat op = CMat::Zero(n * n, n * n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      CMat xi = CMat::Zero(n, n);
      xi(r, c) = 1.0;
      const CMat hx = h * xi;
      const CMat image = hx + hx.transpose();
      op.col(c * n + r) = Eigen::Map<const CVec>(image.data(), n * n);
    }
  return n * n - numerical_rank(op, 1e-10);
}

}  // namespace toruskit
