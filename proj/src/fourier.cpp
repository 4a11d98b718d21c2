#include "toruskit/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace toruskit {

namespace {

// Sign of dzbar_a ^ dzbar_{rest} relative to dzbar_{sorted}, and the merged subset.
int insert_sign(const Subset& s, int a, Subset& merged) {
  merged.clear();
  int before = 0;
  for (int x : s) {
    if (x == a) return 0;
    if (x < a) ++before;
  }
  merged = s;
  merged.insert(merged.begin() + before, a);
  return before % 2 == 0 ? 1 : -1;
}

// dzbar_S ^ dzbar_T = sign dzbar_U.
int wedge_sign(const Subset& s, const Subset& t, Subset& merged) {
  merged.clear();
  int inversions = 0;
  for (int x : s)
    for (int y : t) {
      if (x == y) return 0;
      if (x > y) ++inversions;
    }
  merged = s;
  merged.insert(merged.end(), t.begin(), t.end());
  std::sort(merged.begin(), merged.end());
  return inversions % 2 == 0 ? 1 : -1;
}

std::vector<CMat> zero_components(int n, int degree, int rank) {
  return std::vector<CMat>(static_cast<std::size_t>(binomial(n, degree)), CMat::Zero(rank, rank));
}

}  // namespace

CMat reference_frame(const ComplexStructure& j) {
  return frame_from_structure(j, compatible_metric(j)).basis();
}

void FourierForm::add(const Mode& m, const Subset& s, const CMat& c) {
  auto it = modes.find(m);
  if (it == modes.end()) it = modes.emplace(m, zero_components(n, degree, rank)).first;
  it->second[subset_rank(n, s)] += c;
}

CMat FourierForm::coefficient(const Mode& m, const Subset& s) const {
  const auto it = modes.find(m);
  if (it == modes.end()) return CMat::Zero(rank, rank);
  return it->second[subset_rank(n, s)];
}

double FourierForm::norm() const {
  double s = 0.0;
  for (const auto& [m, comps] : modes)
    for (const auto& c : comps) s += c.squaredNorm();
  return std::sqrt(s);
}

FourierForm FourierForm::operator+(const FourierForm& o) const {
  if (o.n != n || o.degree != degree || o.rank != rank) throw InvalidInput("form shapes differ");
  FourierForm out = *this;
  const auto subsets = k_subsets(n, degree);
  for (const auto& [m, comps] : o.modes)
    for (std::size_t k = 0; k < comps.size(); ++k) out.add(m, subsets[k], comps[k]);
  return out;
}

FourierForm FourierForm::operator*(cplx s) const {
  FourierForm out = *this;
  for (auto& [m, comps] : out.modes)
    for (auto& c : comps) c *= s;
  return out;
}

FourierFormSpace::FourierFormSpace(const ComplexStructure& j, int mode_bound)
    : n_(j.n()), mode_bound_(mode_bound), frame_(reference_frame(j)) {
  if (mode_bound < 0) throw InvalidInput("mode bound must be non-negative");
}

CVec FourierFormSpace::symbol(const Mode& m) const {
  Vec mv(2 * n_);
  for (int k = 0; k < 2 * n_; ++k) mv(k) = m[k];
  return cplx(0.0, 2.0 * std::numbers::pi) * (frame_.transpose() * mv.cast<cplx>());
}

bool FourierFormSpace::in_range(const Mode& m) const {
  return std::all_of(m.begin(), m.end(), [&](int x) { return std::abs(x) <= mode_bound_; });
}

FourierForm FourierFormSpace::dbar(const FourierForm& f) const {
  FourierForm out(n_, f.degree + 1, f.rank);
  if (f.degree >= n_) return out;
  const auto subsets = k_subsets(n_, f.degree);
  Subset merged;
  for (const auto& [m, comps] : f.modes) {
    const CVec c = symbol(m);
    for (std::size_t k = 0; k < comps.size(); ++k)
      for (int a = 0; a < n_; ++a) {
        const int sign = insert_sign(subsets[k], a, merged);
        if (sign != 0 && c(a) != cplx(0.0)) out.add(m, merged, (static_cast<double>(sign) * c(a)) * comps[k]);
      }
  }
  return out;
}

FourierForm FourierFormSpace::dbar_adjoint(const FourierForm& f) const {
  FourierForm out(n_, f.degree - 1, f.rank);
  if (f.degree == 0) return FourierForm(n_, 0, f.rank);
  const auto targets = k_subsets(n_, f.degree - 1);
  Subset merged;
  for (const auto& [m, comps] : f.modes) {
    const CVec c = symbol(m);
    for (const auto& s : targets)
      for (int a = 0; a < n_; ++a) {
        const int sign = insert_sign(s, a, merged);
        if (sign == 0 || c(a) == cplx(0.0)) continue;
        out.add(m, s, (static_cast<double>(sign) * std::conj(c(a))) * comps[subset_rank(n_, merged)]);
      }
  }
  return out;
}

FourierForm FourierFormSpace::green(const FourierForm& f) const {
  FourierForm nonzero(f.n, f.degree, f.rank);
  for (const auto& [m, comps] : f.modes) {
    const double lap = symbol(m).squaredNorm();
    if (lap == 0.0) continue;
    auto& target = nonzero.modes[m];
    target = comps;
    for (auto& c : target) c /= lap;
  }
  return dbar_adjoint(nonzero);
}

FourierForm FourierFormSpace::harmonic(const FourierForm& f) const {
  FourierForm out(f.n, f.degree, f.rank);
  const Mode zero(2 * n_, 0);
  const auto it = f.modes.find(zero);
  if (it != f.modes.end()) out.modes[zero] = it->second;
  return out;
}

FourierForm FourierFormSpace::wedge(const FourierForm& a, const FourierForm& b) const {
  if (a.rank != b.rank || a.n != b.n) throw InvalidInput("form shapes differ");
  FourierForm out(n_, a.degree + b.degree, a.rank);
  if (a.degree + b.degree > n_) return out;
  const auto sa = k_subsets(n_, a.degree);
  const auto sb = k_subsets(n_, b.degree);
  Subset merged;
  Mode sum(2 * n_);
  for (const auto& [ma, ca] : a.modes)
    for (const auto& [mb, cb] : b.modes) {
      for (int k = 0; k < 2 * n_; ++k) sum[k] = ma[k] + mb[k];
      if (!in_range(sum)) continue;
      for (std::size_t p = 0; p < ca.size(); ++p)
        for (std::size_t q = 0; q < cb.size(); ++q) {
          const int sign = wedge_sign(sa[p], sb[q], merged);
          if (sign != 0) out.add(sum, merged, static_cast<double>(sign) * (ca[p] * cb[q]));
        }
    }
  return out;
}

MasseyResult massey_solve(const FourierFormSpace& space, const FourierForm& theta0, const MasseyOptions& opts) {
  if (theta0.degree != 1 || theta0.n != space.n()) throw InvalidInput("theta0 must be a (0,1)-form on the space");
  for (const auto& [m, comps] : theta0.modes)
    if (!space.in_range(m)) throw InvalidInput("theta0 has modes outside the truncation");
  const double scale = std::max(1.0, theta0.norm());
  const double symbol_scale = 2.0 * std::numbers::pi * std::max(1, space.mode_bound()) * space.frame().norm();
  if (space.dbar(theta0).norm() > 1e-10 * scale * symbol_scale) throw NotClosed("dbar theta0 is nonzero");

  MasseyResult out;
  out.terms.push_back(theta0);
  out.theta = theta0;
  for (int k = 1; k < opts.max_terms; ++k) {
    FourierForm sum(space.n(), 2, theta0.rank);
    for (int i = 0; i <= k - 1; ++i) sum = sum + space.wedge(out.terms[i], out.terms[k - 1 - i]);
    const double obstruction = space.harmonic(sum).norm();
    if (obstruction > opts.tol) {
      throw Obstructed("harmonic part " + std::to_string(obstruction) + " at order " + std::to_string(k));
    }
    const FourierForm next = space.green(sum) * cplx(-0.5);
    out.terms.push_back(next);
    out.theta = out.theta + next;
    if (out.theta.norm() > 1e6 * theta0.norm()) throw Diverged("partial sums exceed 1e6 ||theta0||");
    if (next.norm() < opts.tol) {
      out.converged = true;
      break;
    }
  }
  out.mc_residual = (space.dbar(out.theta) + space.wedge(out.theta, out.theta) * cplx(0.5)).norm();
  return out;
}

}  // namespace toruskit
