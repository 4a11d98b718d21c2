#include "toruskit/torus_core.hpp"

#include <cmath>
#include <string>

#include "toruskit/errors.hpp"
#include "toruskit/random.hpp"

namespace toruskit {

Metric::Metric(const Mat& g, double tol) {
  if (g.rows() != g.cols() || g.rows() == 0) throw InvalidInput("metric must be a nonempty square matrix");
  if (!g.allFinite()) throw InvalidInput("metric has non-finite entries");
  if ((g - g.transpose()).norm() > tol * std::max(1.0, g.norm()))
    throw InvalidInput("metric is not symmetric");
  g_ = symmetrize(g);
  if (min_eigenvalue() <= 0.0) throw InvalidInput("metric is not positive definite");
}

double Metric::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(g_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

ComplexStructure::ComplexStructure(const Mat& j, double tol) : j_(j) {
  if (j.rows() != j.cols() || j.rows() == 0 || j.rows() % 2 != 0)
    throw InvalidInput("complex structure must be an even-dimensional square matrix");
  if (!j.allFinite()) throw InvalidInput("complex structure has non-finite entries");
  if (square_residual() > tol * std::max(1.0, std::sqrt(static_cast<double>(j.rows()))) *
                              std::max(1.0, j.squaredNorm() / j.rows()))
    throw InvalidInput("J^2 != -Id (residual " + std::to_string(square_residual()) + ")");
}

double ComplexStructure::compatibility_residual(const Metric& g) const {
  const Mat& m = g.matrix();
  return (j_.transpose() * m * j_ - m).norm() / m.norm();
}

double ComplexStructure::square_residual() const {
  return (j_ * j_ + Mat::Identity(dim(), dim())).norm();
}

IsotropicFrame::IsotropicFrame(const CMat& basis, double tol) : basis_(basis) {
  if (basis.rows() != 2 * basis.cols() || basis.cols() == 0)
    throw InvalidInput("frame must be 2n x n");
  if (!basis.allFinite()) throw InvalidInput("frame has non-finite entries");
  CMat both(basis.rows(), basis.rows());
  both << basis, basis.conjugate();
  // Independence of the columns and span(F) /\ span(conj F) = 0 together.
  if (inverse_condition(both) <= tol)
    throw IllConditioned("frame span meets its conjugate or columns are dependent");
}

double IsotropicFrame::isotropy_residual(const Metric& g) const {
  const CMat gc = g.matrix().cast<cplx>();
  const CMat herm = basis_.adjoint() * gc * basis_;
  return (basis_.transpose() * gc * basis_).norm() / herm.norm();
}

Mat MarkedTorus::real_matrix() const {
  const int n = this->n();
  Mat r(2 * n, 2 * n);
  r.topRows(n) = periods_.real();
  r.bottomRows(n) = periods_.imag();
  return r;
}

ComplexStructure MarkedTorus::induced_structure() const {
  const Mat r = real_matrix();
  const Mat rhs = standard_complex_structure(n()) * r;
  return ComplexStructure(r.fullPivLu().solve(rhs));
}

RationalMatrix MarkedTorus::exact_induced_structure() const {
  if (!exact_) throw BackendRequired("exact induced structure needs a rational torus");
  const RationalMatrix r = exact_->re.vstack(exact_->im);
  const int n = this->n();
  RationalMatrix jstd(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    jstd(k, n + k) = -1;
    jstd(n + k, k) = 1;
  }
  return r.inverse() * (jstd * r);
}

MarkedTorus MarkedTorus::as_float() const {
  MarkedTorus t(*this);
  t.exact_.reset();
  return t;
}

MarkedTorus make_torus(const CMat& periods, double tol) {
  if (periods.rows() == 0 || periods.cols() != 2 * periods.rows())
    throw InvalidInput("period matrix must be n x 2n");
  if (!periods.allFinite()) throw InvalidInput("period matrix has non-finite entries");
  MarkedTorus t;
  t.periods_ = periods;
  const double inv_cond = inverse_condition(t.real_matrix());
  if (inv_cond <= tol)
    throw DegenerateLattice("columns of the period matrix are real-dependent (inverse condition " +
                            std::to_string(inv_cond) + ")");
  t.condition_ = 1.0 / inv_cond;
  return t;
}

MarkedTorus make_exact_torus(const RationalMatrix& re, const RationalMatrix& im) {
  const int n = re.rows();
  if (n == 0 || re.cols() != 2 * n || im.rows() != n || im.cols() != 2 * n)
    throw InvalidInput("period matrix must be n x 2n");
  if (re.vstack(im).rank() < 2 * n) throw DegenerateLattice("rational periods have real rank < 2n");
  const Mat dre = re.to_double();
  const Mat dim = im.to_double();
  CMat p(n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 2 * n; ++j) p(i, j) = cplx(dre(i, j), dim(i, j));
  MarkedTorus t;
  t.periods_ = p;
  t.exact_ = ExactPeriods{re, im};
  t.condition_ = 1.0 / inverse_condition(t.real_matrix());
  return t;
}

MarkedTorus standard_torus(int n) {
  CMat p = CMat::Zero(n, 2 * n);
  for (int k = 0; k < n; ++k) {
    p(k, k) = 1.0;
    p(k, n + k) = cplx(0.0, 1.0);
  }
  return make_torus(p);
}

MarkedTorus standard_exact_torus(int n) {
  RationalMatrix re(n, 2 * n), im(n, 2 * n);
  for (int k = 0; k < n; ++k) {
    re(k, k) = 1;
    im(k, n + k) = 1;
  }
  return make_exact_torus(re, im);
}

CMat eigenbasis(const ComplexStructure& j) {
  const int dim = j.dim();
  const int n = j.n();
  const CMat minus_proj =
      0.5 * (CMat::Identity(dim, dim) + cplx(0.0, 1.0) * j.matrix().cast<cplx>());
  Eigen::ColPivHouseholderQR<CMat> qr(minus_proj);
  const CMat q = qr.householderQ() * CMat::Identity(dim, n);
  CMat u(dim, dim);
  u << q.conjugate(), q;
  if (inverse_condition(u) <= 1e-12) throw IllConditioned("eigenbasis of J is near-singular");
  return u;
}

MarkedTorus torus_from_structure(const ComplexStructure& j) {
  const CMat u = eigenbasis(j);
  const CMat coords = u.inverse();
  return make_torus(coords.topRows(j.n()));
}

ComplexStructure structure_from_frame(const IsotropicFrame& frame, double tol) {
  const int dim = frame.dim();
  const int n = frame.n();
  CMat u(dim, dim);
  u << frame.basis().conjugate(), frame.basis();
  if (inverse_condition(u) <= tol)
    throw IllConditioned("projection of V^{0,1} to V is near-singular");
  CVec eig(dim);
  eig.head(n).setConstant(cplx(0.0, 1.0));
  eig.tail(n).setConstant(cplx(0.0, -1.0));
  const CMat jc = u * eig.asDiagonal() * u.inverse();
  return ComplexStructure(jc.real());
}

IsotropicFrame frame_from_structure(const ComplexStructure& j, const Metric& g, double tol) {
  const double res = j.compatibility_residual(g);
  if (res > tol) throw NotCompatible("J^T g J != g (residual " + std::to_string(res) + ")");
  const CMat u = eigenbasis(j);
  const CMat f = u.rightCols(j.n());
  const CMat herm = f.adjoint() * g.matrix().cast<cplx>() * f;
  Eigen::LLT<CMat> llt(0.5 * (herm + herm.adjoint()));
  // F L^{-H} is unitary for the Hermitian form g(u, conj v).
  const CMat lh = llt.matrixU();
  const CMat unitary = lh.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(f);
  return IsotropicFrame(unitary);
}

int orientation(const ComplexStructure& j) {
  const int n = j.n();
  const CMat u = eigenbasis(j);
  Mat basis(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const Vec x = u.col(k).real();
    basis.col(2 * k) = x;
    basis.col(2 * k + 1) = j.matrix() * x;
  }
  // The same frame built from J_0 has sign (-1)^{n(n-1)/2}.
  const int reference = (n * (n - 1) / 2) % 2 == 0 ? 1 : -1;
  return (basis.determinant() > 0 ? 1 : -1) * reference;
}

ComplexStructure standard_structure(int n) { return ComplexStructure(standard_complex_structure(n)); }

MarkedTorus random_torus(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("n must be positive");
  Rng rng(seed);
  for (;;) {
    try {
      return make_torus(rng.complex_normal_matrix(n, 2 * n));
    } catch (const DegenerateLattice&) {
    }
  }
}

MarkedTorus random_exact_torus(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("n must be positive");
  Rng rng(seed);
  for (;;) {
    RationalMatrix re(n, 2 * n), im(n, 2 * n);
    for (int r = 0; r < n; ++r) {
      re(r, r) = 1;
      for (int c = 0; c < n; ++c) {
        re(r, n + c) = Rational(rng.uniform_int(-3, 3), rng.uniform_int(1, 3));
        im(r, n + c) = Rational(rng.uniform_int(-3, 3), rng.uniform_int(1, 3));
      }
    }
    try {
      return make_exact_torus(re, im);
    } catch (const DegenerateLattice&) {
    }
  }
}

ComplexStructure random_structure(const Metric& g, std::uint64_t seed) {
  const int dim = g.dim();
  if (dim % 2 != 0) throw InvalidInput("metric dimension must be even");
  Rng rng(seed);
  const Mat q = haar_orthogonal(dim, rng);
  const Mat jq = q * standard_complex_structure(dim / 2) * q.transpose();
  const Eigen::LLT<Mat> llt(g.matrix());
  const Mat l = llt.matrixL();
  // J = L^{-T} J' L^T with g = L L^T.
  const Mat lt_jq = l.transpose().triangularView<Eigen::Upper>().solve(jq);
  return ComplexStructure(lt_jq * l.transpose());
}

Metric compatible_metric(const ComplexStructure& j) {
  const int dim = j.dim();
  return Metric(symmetrize(0.5 * (Mat::Identity(dim, dim) + j.matrix().transpose() * j.matrix())));
}

}  // namespace toruskit
