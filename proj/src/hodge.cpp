#include "toruskit/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "toruskit/errors.hpp"
#include "toruskit/lattice.hpp"

namespace toruskit {

namespace {

// Number of V^{1,0} factors in the eigenbasis wedge indexed by `s`.
int holomorphic_count(const Subset& s, int n) {
  return static_cast<int>(std::count_if(s.begin(), s.end(), [n](int i) { return i < n; }));
}

std::map<HodgeType, CMat> projectors_from_basis(const CMat& u, int k) {
  const int dim = static_cast<int>(u.rows());
  const int n = dim / 2;
  const CMat wedge_u = compound_matrix(u, k);
  const CMat wedge_uinv = compound_matrix(u.inverse(), k);
  const auto subsets = k_subsets(dim, k);
  std::map<HodgeType, CMat> out;
  for (int p = std::max(0, k - n); p <= std::min(k, n); ++p) {
    Eigen::VectorXcd mask = Eigen::VectorXcd::Zero(static_cast<int>(subsets.size()));
    for (std::size_t s = 0; s < subsets.size(); ++s)
      if (holomorphic_count(subsets[s], n) == p) mask(static_cast<int>(s)) = 1.0;
    out[{p, k - p}] = wedge_u * mask.asDiagonal() * wedge_uinv;
  }
  return out;
}

std::vector<long long> to_long_vector(const Eigen::VectorXd& v) {
  std::vector<long long> out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = std::llround(v(i));
  return out;
}

void normalize_sign(std::vector<long long>& v) {
  for (long long x : v)
    if (x != 0) {
      if (x < 0)
        for (auto& y : v) y = -y;
      return;
    }
}

Mat lattice_matrix(const std::vector<std::vector<long long>>& vs, int dim) {
  Mat l(dim, static_cast<int>(vs.size()));
  for (std::size_t c = 0; c < vs.size(); ++c) {
    if (static_cast<int>(vs[c].size()) != dim) throw InvalidInput("lattice vector has wrong length");
    for (int i = 0; i < dim; ++i) l(i, static_cast<int>(c)) = static_cast<double>(vs[c][i]);
  }
  return l;
}

}  // namespace

CMat hodge_projector(const ComplexStructure& j, int p, int q) {
  const int n = j.n();
  if (p < 0 || q < 0 || p > n || q > n) throw InvalidInput("Hodge type out of range");
  return hodge_projectors(j, p + q).at({p, q});
}

std::map<HodgeType, CMat> hodge_projectors(const ComplexStructure& j, int k) {
  if (k < 0 || k > j.dim()) throw InvalidInput("degree out of range");
  return projectors_from_basis(eigenbasis(j), k);
}

std::map<HodgeType, MultiVector> pq_decompose(const MultiVector& w, const ComplexStructure& j) {
  if (w.dim() != j.dim()) throw InvalidInput("multivector and structure dimensions differ");
  std::map<HodgeType, MultiVector> out;
  for (const auto& [type, proj] : hodge_projectors(j, w.degree()))
    out.emplace(type, MultiVector(w.dim(), w.degree(), proj * w.coeffs()));
  return out;
}

std::optional<HodgeType> hodge_type(const MultiVector& w, const ComplexStructure& j, double tol) {
  const auto parts = pq_decompose(w, j);
  const double scale = tol * w.norm();
  std::optional<HodgeType> found;
  for (const auto& [type, part] : parts) {
    if (part.norm() < scale) continue;
    if (found) return std::nullopt;
    found = type;
  }
  return found;
}

double pp_residual(const MultiVector& w, const ComplexStructure& j) {
  if (w.degree() % 2 != 0) throw InvalidInput("(p,p) classes have even degree");
  const int p = w.degree() / 2;
  const double norm = w.norm();
  if (norm == 0.0) return 0.0;
  const CVec pp = hodge_projector(j, p, p) * w.coeffs();
  return (w.coeffs() - pp).norm() / norm;
}

std::vector<MultiVector> integral_pp_kernel(const MarkedTorus& t, int p) {
  if (!t.exact()) throw BackendRequired("integral_pp_kernel needs a rational torus");
  const int n = t.n();
  if (p < 0 || p > n) throw InvalidInput("p out of range");
  // A real class is of pure type (p,p) iff the derivation of J kills it.
  const RationalMatrix d = derivation_matrix(t.exact_induced_structure(), 2 * p);
  const RationalMatrix kernel = d.null_space();
  std::vector<MultiVector> out;
  for (int c = 0; c < kernel.cols(); ++c) {
    std::vector<Rational> col(kernel.rows());
    for (int r = 0; r < kernel.rows(); ++r) col[r] = kernel(r, c);
    const auto ints = primitive_integer_vector(col);
    CVec coeffs(kernel.rows());
    for (int r = 0; r < kernel.rows(); ++r) coeffs(r) = static_cast<double>(ints[r]);
    out.emplace_back(2 * n, 2 * p, coeffs);
  }
  return out;
}

std::optional<PPCertificate> pp_class_heuristic(const MarkedTorus& t, int p, int bound) {
  const int n = t.n();
  if (p < 1 || p > n) throw InvalidInput("p out of range");
  if (bound < 1) return std::nullopt;
  const ComplexStructure j = t.induced_structure();
  const Mat d = derivation_matrix(j.matrix(), 2 * p);
  Eigen::JacobiSVD<Mat> svd(d, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > 1e-9 * s(0)) ++rank;
  const Mat k = svd.matrixV().leftCols(rank).transpose();
  auto relations = integer_relations(k, 1e10, 1e-8);
  if (relations.empty()) return std::nullopt;
  if (relations.size() > 10) relations.resize(10);

  // Small {-1,0,1} combinations of the relation vectors, best first.
  const int m = static_cast<int>(relations.size());
  const int len = static_cast<int>(relations[0].size());
  using Key = std::tuple<double, int, std::vector<long long>>;
  std::vector<Key> candidates;
  std::vector<int> digits(m, 0);
  long long total = 1;
  for (int i = 0; i < m; ++i) total *= 3;
  for (long long code = 1; code < total; ++code) {
    long long c = code;
    for (int i = 0; i < m; ++i, c /= 3) digits[i] = static_cast<int>(c % 3) - 1;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(len);
    for (int i = 0; i < m; ++i)
      if (digits[i] != 0) w += digits[i] * relations[i];
    if (w.cwiseAbs().maxCoeff() > bound + 0.5 || w.squaredNorm() < 0.5) continue;
    auto v = to_long_vector(w);
    int first = 0;
    while (v[first] == 0) ++first;
    if (v[first] < 0) continue;
    candidates.emplace_back(w.squaredNorm(), first, std::move(v));
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& [norm2, first, v] : candidates) {
    CVec coeffs(len);
    for (int i = 0; i < len; ++i) coeffs(i) = static_cast<double>(v[i]);
    MultiVector w(2 * n, 2 * p, coeffs);
    const double res = pp_residual(w, j);
    if (res < 1e-7) return PPCertificate{p, w, res};
  }
  return std::nullopt;
}

SublatticeCheck verify_subtorus(const MarkedTorus& t,
                                const std::vector<std::vector<long long>>& candidate, double tol) {
  const int dim = 2 * t.n();
  if (candidate.empty()) throw InvalidInput("empty candidate sublattice");
  const Mat l = lattice_matrix(candidate, dim);
  SublatticeCheck out;
  int joint = 0;
  if (t.exact()) {
    RationalMatrix lq(dim, l.cols());
    for (int i = 0; i < dim; ++i)
      for (int c = 0; c < l.cols(); ++c) lq(i, c) = static_cast<long long>(l(i, c));
    out.real_rank = lq.rank();
    joint = lq.hstack(t.exact_induced_structure() * lq).rank();
  } else {
    Mat both(dim, 2 * l.cols());
    both << l, t.induced_structure().matrix() * l;
    out.real_rank = numerical_rank(l, tol);
    joint = numerical_rank(both, tol);
  }
  // span(L) + J span(L) has real dimension twice the complex rank of phi(L).
  out.complex_rank = joint / 2;
  out.is_subtorus = out.real_rank > 0 && out.real_rank == 2 * out.complex_rank;
  return out;
}

std::optional<SubtorusCertificate> subtorus_search_exact(const MarkedTorus& t) {
  if (!t.exact()) throw BackendRequired("exact subtorus search needs a rational torus");
  const int dim = 2 * t.n();
  const RationalMatrix j = t.exact_induced_structure();
  for (int k = 0; k < dim; ++k) {
    // span{e_k, J e_k} is J-invariant; {e_k, u} is a basis of its lattice
    // points when u is the primitive vector along J e_k minus its e_k part.
    std::vector<Rational> rest(dim);
    bool nonzero = false;
    for (int i = 0; i < dim; ++i) {
      rest[i] = i == k ? Rational(0) : j(i, k);
      nonzero = nonzero || rest[i] != 0;
    }
    if (!nonzero) continue;
    const auto u = primitive_integer_vector(rest);
    std::vector<long long> e(dim, 0), uv(dim);
    e[k] = 1;
    bool fits = true;
    for (int i = 0; i < dim; ++i) {
      if (boost::multiprecision::abs(u[i]) > BigInt(1) << 62) fits = false;
      uv[i] = fits ? static_cast<long long>(u[i]) : 0;
    }
    if (!fits) continue;
    return SubtorusCertificate{{e, uv}, 1};
  }
  return std::nullopt;
}

std::optional<SubtorusCertificate> subtorus_search_heuristic(const MarkedTorus& t, int bound,
                                                             double tol) {
  if (bound < 1) return std::nullopt;
  const int dim = 2 * t.n();
  const Mat j = t.induced_structure().matrix();
  std::vector<Eigen::VectorXd> anchors;
  for (int a = 0; a < dim; ++a) anchors.push_back(Eigen::VectorXd::Unit(dim, a));
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b)
      for (int sb : {1, -1}) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
        v(a) = 1;
        v(b) = sb;
        anchors.push_back(v);
      }
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b)
      for (int c = b + 1; c < dim; ++c)
        for (int sb : {1, -1})
          for (int sc : {1, -1}) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
            v(a) = 1;
            v(b) = sb;
            v(c) = sc;
            anchors.push_back(v);
          }

  for (const auto& a : anchors) {
    Mat plane(dim, 2);
    plane << a, j * a;
    const Mat complement = null_space(plane.transpose(), 1e-12);
    const auto relations = integer_relations(complement.transpose(), 1e10, 1e-8);
    std::vector<std::vector<long long>> basis;
    for (const auto& r : relations) {
      if (r.cwiseAbs().maxCoeff() > bound + 0.5) continue;
      auto v = to_long_vector(r);
      normalize_sign(v);
      basis.push_back(v);
      if (basis.size() == 2) break;
    }
    if (basis.size() < 2) continue;
    const SublatticeCheck check = verify_subtorus(t.as_float(), basis, tol);
    if (check.is_subtorus && check.complex_rank == 1) return SubtorusCertificate{basis, 1};
  }
  return std::nullopt;
}

GenericityReport is_generic(const MarkedTorus& t, const GenericityParams& params) {
  if (t.n() < 3) throw DimensionTooSmall("genericity is only defined here for n >= 3");
  GenericityReport report;
  report.bound = params.bound;
  report.exact = t.exact().has_value();
  if (report.exact) {
    report.subtorus = subtorus_search_exact(t);
    if (!report.subtorus) {
      for (int p = 1; p <= 2 && !report.pp_class; ++p) {
        const auto kernel = integral_pp_kernel(t, p);
        if (!kernel.empty())
          report.pp_class = PPCertificate{p, kernel.front(), pp_residual(kernel.front(), t.induced_structure())};
      }
    }
  } else {
    report.subtorus = subtorus_search_heuristic(t, params.bound, params.tol);
    for (int p = 1; p <= 2 && !report.subtorus && !report.pp_class; ++p)
      report.pp_class = pp_class_heuristic(t, p, params.bound);
  }
  report.verdict = (report.subtorus || report.pp_class) ? Verdict::NonGeneric
                                                        : Verdict::NoObstructionFound;
  return report;
}

}  // namespace toruskit
