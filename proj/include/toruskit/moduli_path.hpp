#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toruskit/errors.hpp"
#include "toruskit/torus_core.hpp"

namespace toruskit {

/// Eigen-data of the metric ratio g^{-1/2} g1 g^{-1/2}. `matching` holds
/// 1-based positions in the ascending eigenvalue order; `basis` holds the
/// matching g-orthonormal eigenvectors as columns.
struct Pairing {
  std::vector<std::pair<int, int>> matching;
  Vec eigenvalues;
  Mat basis;
};

/// Pairs consecutive sorted eigenvalues; none unless each gap is at most
/// tol times the pair's larger value.
std::optional<Pairing> paired_eigenvalues(const Metric& g, const Metric& g1, double tol = 1e-7);

/// A structure compatible with both metrics: the block [[0,1],[-1,0]] on
/// each eigenvalue pair. Throws NotPaired.
ComplexStructure common_structure_from_metrics(const Metric& g, const Metric& g1, double tol = 1e-7);

struct CommonMetricOptions {
  int max_iterations = 5000;
  double min_eigenvalue = 1e-7;
};

/// Positive definite element of {M : I^T M I = M, J^T M J = M} found by
/// Dykstra alternating projections; none if none with lambda_min above the
/// threshold was found.
std::optional<Metric> common_metric(const ComplexStructure& i, const ComplexStructure& j,
                                    const CommonMetricOptions& opts = {});

class FactorizationFailed : public Error {
 public:
  FactorizationFailed(const std::string& what, Mat best, double defect)
      : Error(Kind::FactorizationFailed, "FactorizationFailed: " + what),
        best_(std::move(best)),
        defect_(defect) {}
  const Mat& best() const { return best_; }
  double defect() const { return defect_; }

 private:
  Mat best_;
  double defect_;
};

struct FactorizeOptions {
  int restarts = 16;
  int max_evaluations = 20000;  // simplex evaluations over all restarts
  double tol = 1e-10;           // defect threshold
  bool polish = true;           // Gauss-Newton refinement after each simplex run
  bool closed_form = true;      // try the cyclic diagonal solution first
  std::uint64_t seed = 0;
  int threads = 1;
};

struct FactorizationResult {
  Mat g1;
  double defect = 0.0;
  int evaluations = 0;
  int restart = -1;  // -1 for the closed form
};

/// Sum over consecutive sorted pairs of (lambda_{2i-1} - lambda_{2i})^2 for
/// the eigenvalues of x^{-1/2} h x^{-1/2}.
double pairing_defect(const Mat& x, const Mat& h);

/// For diagonal d = diag(h) (g = Id), alphas with
/// X = diag(a1,a1,...,an,an) and h X^{-1} paired as {(2,3),...,(2n,1)},
/// normalized by a1 = 1. Exists iff prod d_odd = prod d_even.
std::optional<Vec> cyclic_closed_form(const Vec& d, double rel_tol = 1e-12);

/// g1 with paired_eigenvalues(g, g1) and paired_eigenvalues(g1, h).
/// Throws FactorizationFailed with the best candidate found.
FactorizationResult pair_factorize(const Metric& g, const Metric& h, const FactorizeOptions& opts = {});

struct Chain {
  std::vector<ComplexStructure> structures;
  std::vector<Metric> metrics;
  std::string strategy;  // "identical", "direct", "three-hop", "six-hop"
  int hops() const { return static_cast<int>(metrics.size()); }
};

struct ChainReport {
  bool pass = false;
  double max_residual = 0.0;
  std::vector<double> hop_residuals;
};

/// Checks every hop metric against both endpoints, J^2 = -Id and positive
/// definiteness; passes when the largest relative residual is below tol.
ChainReport verify_chain(const Chain& c, double tol = 1e-8);

struct ConnectOptions {
  int max_attempts = 8;    // random middles for the 6-hop fallback
  int metric_attempts = 4; // compatible metric pairs tried per 3-hop leg
  std::uint64_t seed = 0;
  FactorizeOptions factorize{};
  bool certify_generic = false;
  int generic_bound = 10;
};

/// Chain of at most 6 hops from i to j. Throws ChainNotFound.
Chain connect(const ComplexStructure& i, const ComplexStructure& j, const ConnectOptions& opts = {});

}  // namespace toruskit
