#pragma once

#include <map>
#include <utility>
#include <vector>

#include "toruskit/errors.hpp"
#include "toruskit/fourier.hpp"
#include "toruskit/random.hpp"
#include "toruskit/torus_core.hpp"
#include "toruskit/twistor.hpp"

namespace toruskit {

/// Unitary character of Z^{2n}: chi(e_k) = exp(2 pi i phases_k), phases in [0,1).
class Character {
 public:
  explicit Character(const Vec& phases);
  static Character trivial(int n) { return Character(Vec::Zero(2 * n)); }

  const Vec& phases() const { return phases_; }
  int n() const { return static_cast<int>(phases_.size()) / 2; }
  cplx value(int k) const;
  bool operator==(const Character& o) const;

 private:
  Vec phases_;
};

struct FlatBlock {
  Character character;
  int rank = 1;
};

/// Direct sum of flat Hermitian bundles, in filtration order.
class GradedFlatBundle {
 public:
  explicit GradedFlatBundle(std::vector<FlatBlock> blocks);

  const std::vector<FlatBlock>& blocks() const { return blocks_; }
  int size() const { return static_cast<int>(blocks_.size()); }
  int n() const { return blocks_.front().character.n(); }
  int rank(int i) const { return blocks_[i].rank; }
  int total_rank() const;
  /// Row/column offset of block i in the total matrix.
  int offset(int i) const;

 private:
  std::vector<FlatBlock> blocks_;
};

/// Dimension of Ext^1(B_i, B_j) for 0-based i > j. Throws IndexOrder.
int ext_dimension(const GradedFlatBundle& b, int i, int j);

/// Constant (0,1)-forms nu_{ij} in (V^{0,1})^* (x) Hom(C^{r_i}, C^{r_j}) for
/// 0-based i > j, stored as n matrices of size r_j x r_i: the coefficients of
/// dzbar_1 .. dzbar_n in the frame of the reference structure.
class ExtClass {
 public:
  explicit ExtClass(GradedFlatBundle base);

  const GradedFlatBundle& base() const { return base_; }
  int n() const { return base_.n(); }
  const std::map<std::pair<int, int>, std::vector<CMat>>& forms() const { return forms_; }

  /// Throws IndexOrder for i <= j and InvalidInput for shape mismatches or a
  /// nonzero form between blocks with different characters.
  void set(int i, int j, std::vector<CMat> form);
  /// Zero matrices when unset.
  std::vector<CMat> get(int i, int j) const;

  /// N_a: the dzbar_a coefficient as an R x R strictly block upper
  /// triangular matrix (block row j, column i holds nu_{ij}).
  std::vector<CMat> operator_matrices() const;
  double norm() const;

 private:
  GradedFlatBundle base_;
  std::map<std::pair<int, int>, std::vector<CMat>> forms_;
};

/// nu ^ nu as constant (0,2)-forms: the dzbar_a ^ dzbar_b coefficient (a < b)
/// is [N_a, N_b], whose (j, i) block is sum_k nu_{kj} nu_{ik}.
class Obstruction {
 public:
  Obstruction(int n, std::vector<CMat> components);

  int n() const { return n_; }
  /// Coefficient of dzbar_a ^ dzbar_b, 0-based a < b.
  const CMat& component(int a, int b) const;
  const std::vector<CMat>& components() const { return components_; }
  /// Spectral norm of the stacked map C^R -> (Lambda^2)^* (x) C^R.
  double norm() const;

 private:
  int n_;
  std::vector<CMat> components_;  // k_subsets(n, 2) order
};

Obstruction mc_obstruction(const ExtClass& nu);

/// Operator norm of (dbar_gr + nu)^2 on (0,0)-sections, assembled per Fourier
/// mode |m_k| <= mode_bound with the twisted symbols 2 pi i F^T (m + phi).
double dbar_square_residual(const ExtClass& nu, const ComplexStructure& j, int mode_bound);

/// Block (i, j) scaled by alpha_i / alpha_j.
ExtClass gauge_scale(const ExtClass& nu, const std::vector<double>& alpha);

/// Interpolates each scalar entry of nu (given in the frame of j) by the
/// covector vanishing on V^{0,1}_I and equal to nu on V^{0,1}_J, and reads
/// it off in the frame of l. Throws NotTransversal.
ExtClass twistor_extend(const ExtClass& nu, const TwistorPoint& i, const TwistorPoint& j,
                        const TwistorPoint& l);

struct FlatConnectionReport {
  double curvature_norm = 0.0;
  double max_commutator = 0.0;
  std::vector<CMat> holonomy;  // rho(e_k), k = 1..2n
};

/// Connection matrix omega = nu in the flat frame; rho(e_k) = exp(omega(e_k)) chi(e_k).
FlatConnectionReport flat_connection_check(const ExtClass& nu, const ComplexStructure& j);

/// Random class on `base`. With `integrable`, every nu_{ij} is x (x) M_{ij}
/// for one covector x, so the obstruction vanishes.
ExtClass random_ext_class(const GradedFlatBundle& base, Rng& rng, bool integrable);

}  // namespace toruskit
