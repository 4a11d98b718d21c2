#include "toruskit/bundles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace toruskit {

namespace {

double spectral_norm_of_stack(const std::vector<CMat>& parts, int rank) {
  CMat gram = CMat::Zero(rank, rank);
  for (const auto& p : parts) gram += p.adjoint() * p;
  Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(rank - 1)));
}

std::vector<CMat> commutator_components(const std::vector<CMat>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<CMat> out;
  for (const auto& s : k_subsets(n, 2)) out.push_back(m[s[0]] * m[s[1]] - m[s[1]] * m[s[0]]);
  return out;
}

// Exact exponential of a nilpotent matrix of index at most its size.
CMat nilpotent_exp(const CMat& a) {
  const int r = static_cast<int>(a.rows());
  CMat out = CMat::Identity(r, r), term = CMat::Identity(r, r);
  for (int p = 1; p <= r; ++p) {
    term = term * a / static_cast<double>(p);
    out += term;
  }
  return out;
}

}  // namespace

Character::Character(const Vec& phases) : phases_(phases) {
  if (phases.size() == 0 || phases.size() % 2 != 0) throw InvalidInput("character needs 2n phases");
  for (int k = 0; k < phases_.size(); ++k) {
    if (!std::isfinite(phases_(k))) throw InvalidInput("phase is not finite");
    phases_(k) -= std::floor(phases_(k));
    if (phases_(k) >= 1.0) phases_(k) = 0.0;
  }
}

cplx Character::value(int k) const { return std::polar(1.0, 2.0 * std::numbers::pi * phases_(k)); }

bool Character::operator==(const Character& o) const {
  if (o.phases_.size() != phases_.size()) return false;
  for (int k = 0; k < phases_.size(); ++k) {
    const double d = std::abs(phases_(k) - o.phases_(k));
    if (std::min(d, 1.0 - d) > 1e-12) return false;
  }
  return true;
}

GradedFlatBundle::GradedFlatBundle(std::vector<FlatBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw InvalidInput("bundle needs at least one block");
  for (const auto& b : blocks_) {
    if (b.rank < 1) throw InvalidInput("block rank must be positive");
    if (b.character.n() != blocks_.front().character.n()) throw InvalidInput("characters of different dimension");
  }
}

int GradedFlatBundle::total_rank() const { return offset(size()); }

int GradedFlatBundle::offset(int i) const {
  int o = 0;
  for (int k = 0; k < i; ++k) o += blocks_[k].rank;
  return o;
}

int ext_dimension(const GradedFlatBundle& b, int i, int j) {
  if (i <= j) throw IndexOrder("Ext^1(B_i, B_j) needs i > j");
  if (i >= b.size() || j < 0) throw InvalidInput("block index out of range");
  if (!(b.blocks()[i].character == b.blocks()[j].character)) return 0;
  return b.n() * b.rank(i) * b.rank(j);
}

ExtClass::ExtClass(GradedFlatBundle base) : base_(std::move(base)) {}

void ExtClass::set(int i, int j, std::vector<CMat> form) {
  if (i <= j) throw IndexOrder("forms are indexed by i > j");
  if (i >= base_.size() || j < 0) throw InvalidInput("block index out of range");
  if (static_cast<int>(form.size()) != n()) throw InvalidInput("a form needs n coefficient matrices");
  bool zero = true;
  for (const auto& m : form) {
    if (m.rows() != base_.rank(j) || m.cols() != base_.rank(i)) throw InvalidInput("form matrix has wrong shape");
    zero = zero && m.isZero(0.0);
  }
  if (!zero && !(base_.blocks()[i].character == base_.blocks()[j].character)) {
    throw InvalidInput("Ext^1 vanishes between blocks with different characters");
  }
  forms_[{i, j}] = std::move(form);
}

std::vector<CMat> ExtClass::get(int i, int j) const {
  const auto it = forms_.find({i, j});
  if (it != forms_.end()) return it->second;
  return std::vector<CMat>(n(), CMat::Zero(base_.rank(j), base_.rank(i)));
}

std::vector<CMat> ExtClass::operator_matrices() const {
  const int r = base_.total_rank();
  std::vector<CMat> out(n(), CMat::Zero(r, r));
  for (const auto& [ij, form] : forms_) {
    const auto [i, j] = ij;
    for (int a = 0; a < n(); ++a)
      out[a].block(base_.offset(j), base_.offset(i), base_.rank(j), base_.rank(i)) = form[a];
  }
  return out;
}

double ExtClass::norm() const {
  double s = 0.0;
  for (const auto& [ij, form] : forms_)
    for (const auto& m : form) s += m.squaredNorm();
  return std::sqrt(s);
}

Obstruction::Obstruction(int n, std::vector<CMat> components) : n_(n), components_(std::move(components)) {}

const CMat& Obstruction::component(int a, int b) const {
  if (!(0 <= a && a < b && b < n_)) throw InvalidInput("need 0 <= a < b < n");
  return components_[subset_rank(n_, {a, b})];
}

double Obstruction::norm() const {
  if (components_.empty()) return 0.0;
  return spectral_norm_of_stack(components_, static_cast<int>(components_.front().rows()));
}

Obstruction mc_obstruction(const ExtClass& nu) {
  return Obstruction(nu.n(), commutator_components(nu.operator_matrices()));
}

double dbar_square_residual(const ExtClass& nu, const ComplexStructure& j, int mode_bound) {
  if (mode_bound < 1) throw InvalidInput("mode bound must be at least 1");
  const GradedFlatBundle& b = nu.base();
  const int n = j.n();
  if (n != nu.n()) throw InvalidInput("class and structure have different dimensions");
  const int r = b.total_rank();
  const CMat f = reference_frame(j);
  const std::vector<CMat> nmat = nu.operator_matrices();

  // Per-block symbol offsets 2 pi i F^T phi_i and the unit symbols 2 pi i F^T e_k.
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  std::vector<CVec> twist;
  for (const auto& blk : b.blocks()) twist.push_back(two_pi_i * (f.transpose() * blk.character.phases().cast<cplx>()));
  const CMat unit = two_pi_i * f.transpose();

  const int dim = 2 * n;
  const auto pairs = k_subsets(n, 2);
  std::vector<int> m(dim, -mode_bound);
  std::vector<CMat> d1(n, CMat::Zero(r, r));
  CMat comm(r, r), gram(r, r);
  Eigen::SelfAdjointEigenSolver<CMat> es(r);
  CMat cached_gram = CMat::Constant(r, r, std::numeric_limits<double>::quiet_NaN());
  double cached_top = 0.0;
  double worst = 0.0;
  CVec base(n);
  while (true) {
    base.noalias() = unit * Eigen::Map<const Eigen::VectorXi>(m.data(), dim).cast<cplx>();
    for (int a = 0; a < n; ++a) {
      d1[a] = nmat[a];
      for (int i = 0; i < b.size(); ++i) {
        const cplx c = base(a) + twist[i](a);
        for (int t = 0; t < b.rank(i); ++t) d1[a](b.offset(i) + t, b.offset(i) + t) += c;
      }
    }
    // (D^2 s)_{ab} = D_a D_b s - D_b D_a s on the mode.
    gram.setZero();
    for (const auto& p : pairs) {
      comm.noalias() = d1[p[0]] * d1[p[1]];
      comm.noalias() -= d1[p[1]] * d1[p[0]];
      gram.noalias() += comm.adjoint() * comm;
    }
    // Weyl: lambda_max moves by at most the Frobenius distance, so a nearby
    // cached solve gives an upper bound within 1e-13 of the exact value.
    const double moved = (gram - cached_gram).norm();
    double top;
    if (moved <= 1e-13 * (1.0 + cached_gram.norm())) {
      top = cached_top + moved;
    } else {
      es.compute(gram, Eigen::EigenvaluesOnly);
      top = es.eigenvalues()(r - 1);
      cached_gram = gram;
      cached_top = top;
    }
    worst = std::max(worst, std::sqrt(std::max(0.0, top)));

    int k = 0;
    while (k < dim && m[k] == mode_bound) m[k++] = -mode_bound;
    if (k == dim) break;
    ++m[k];
  }
  return worst;
}

ExtClass gauge_scale(const ExtClass& nu, const std::vector<double>& alpha) {
  if (static_cast<int>(alpha.size()) != nu.base().size()) throw InvalidInput("one scale per block");
  for (double a : alpha)
    if (!(a > 0)) throw InvalidInput("scales must be positive");
  ExtClass out(nu.base());
  for (const auto& [ij, form] : nu.forms()) {
    std::vector<CMat> scaled = form;
    for (auto& m : scaled) m *= alpha[ij.first] / alpha[ij.second];
    out.set(ij.first, ij.second, std::move(scaled));
  }
  return out;
}

ExtClass twistor_extend(const ExtClass& nu, const TwistorPoint& i, const TwistorPoint& j, const TwistorPoint& l) {
  const int n = nu.n();
  if (i.n() != n || j.n() != n || l.n() != n) throw InvalidInput("points and class have different dimensions");
  if (!transversal(i, j)) throw NotTransversal("V^{0,1}_I and V^{0,1}_J intersect");
  CMat stacked(2 * n, 2 * n);
  stacked << i.frame().basis(), j.frame().basis();
  // lambda^T [F_I F_J] = [0 w^T]; the value at L is F_L^T lambda.
  CMat rhs = CMat::Zero(2 * n, n);
  rhs.bottomRows(n) = CMat::Identity(n, n);
  const CMat transfer = l.frame().basis().transpose() * stacked.transpose().fullPivLu().solve(rhs);

  ExtClass out(nu.base());
  for (const auto& [ij, form] : nu.forms()) {
    std::vector<CMat> moved(n, CMat::Zero(form[0].rows(), form[0].cols()));
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) moved[a] += transfer(a, c) * form[c];
    out.set(ij.first, ij.second, std::move(moved));
  }
  return out;
}

FlatConnectionReport flat_connection_check(const ExtClass& nu, const ComplexStructure& j) {
  const int n = nu.n();
  const GradedFlatBundle& b = nu.base();
  const int r = b.total_rank();
  const CMat f = reference_frame(j);
  CMat basis(2 * n, 2 * n);
  basis << f, f.conjugate();
  // Column k: coordinates of e_k in the basis [F | conj F]; the first n are dzbar_a(e_k).
  const CMat coords = basis.fullPivLu().solve(CMat::Identity(2 * n, 2 * n));
  const std::vector<CMat> nmat = nu.operator_matrices();

  FlatConnectionReport report;
  report.curvature_norm = mc_obstruction(nu).norm();
  for (int k = 0; k < 2 * n; ++k) {
    CMat omega = CMat::Zero(r, r);
    for (int a = 0; a < n; ++a) omega += coords(a, k) * nmat[a];
    CVec chi(r);
    for (int i = 0; i < b.size(); ++i) chi.segment(b.offset(i), b.rank(i)).setConstant(b.blocks()[i].character.value(k));
    report.holonomy.push_back(nilpotent_exp(omega) * chi.asDiagonal());
  }
  for (int k = 0; k < 2 * n; ++k)
    for (int q = k + 1; q < 2 * n; ++q) {
      const CMat& x = report.holonomy[k];
      const CMat& y = report.holonomy[q];
      report.max_commutator = std::max(report.max_commutator, (x * y - y * x).norm());
    }
  return report;
}

ExtClass random_ext_class(const GradedFlatBundle& base, Rng& rng, bool integrable) {
  const int n = base.n();
  ExtClass out(base);
  const CVec direction = rng.complex_normal_vector(n);
  for (int i = 0; i < base.size(); ++i)
    for (int j = 0; j < i; ++j) {
      if (!(base.blocks()[i].character == base.blocks()[j].character)) continue;
      std::vector<CMat> form;
      if (integrable) {
        const CMat m = rng.complex_normal_matrix(base.rank(j), base.rank(i));
        for (int a = 0; a < n; ++a) form.push_back(direction(a) * m);
      } else {
        for (int a = 0; a < n; ++a) form.push_back(rng.complex_normal_matrix(base.rank(j), base.rank(i)));
      }
      out.set(i, j, std::move(form));
    }
  return out;
}

}  // namespace toruskit
