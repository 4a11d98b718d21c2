#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toruskit/exterior.hpp"
#include "toruskit/torus_core.hpp"

namespace toruskit {

using HodgeType = std::pair<int, int>;

/// Projector onto the (p,q) part of Lambda^k(V_C), k = p + q, in the
/// standard basis. Built from wedges of an eigenbasis of J.
CMat hodge_projector(const ComplexStructure& j, int p, int q);
/// All projectors of degree k keyed by (p,q).
std::map<HodgeType, CMat> hodge_projectors(const ComplexStructure& j, int k);

std::map<HodgeType, MultiVector> pq_decompose(const MultiVector& w, const ComplexStructure& j);

/// (p,q) if every other component has norm below tol * ||w||.
std::optional<HodgeType> hodge_type(const MultiVector& w, const ComplexStructure& j,
                                    double tol = kDefaultTol);

/// ||w - Pi_{p,p} w|| / ||w|| for w of degree 2p.
double pp_residual(const MultiVector& w, const ComplexStructure& j);

/// Basis of the integral classes of pure type (p,p) in Lambda^{2p} of the
/// lattice, each scaled to a primitive integer vector. Exact arithmetic;
/// throws BackendRequired on a float torus.
std::vector<MultiVector> integral_pp_kernel(const MarkedTorus& t, int p);

struct PPCertificate {
  int p = 0;
  MultiVector cls{2, 2};
  double residual = 0.0;
};

/// Integer-relation search for an integral (p,p) class with coefficients
/// bounded by `bound`. Absence of a result is not a proof.
std::optional<PPCertificate> pp_class_heuristic(const MarkedTorus& t, int p, int bound);

struct SubtorusCertificate {
  std::vector<std::vector<long long>> basis;  // lattice vectors, length 2n
  int l = 0;                                  // complex dimension
};

struct SublatticeCheck {
  int real_rank = 0;
  int complex_rank = 0;  // complex dimension of the span of phi(L)
  bool is_subtorus = false;
};

/// Rank test on phi(L): exact for rational tori, numerical (tol) otherwise.
SublatticeCheck verify_subtorus(const MarkedTorus& t,
                                const std::vector<std::vector<long long>>& candidate,
                                double tol = 1e-7);

/// Exact search for J-invariant rational planes (l = 1); requires a rational torus.
std::optional<SubtorusCertificate> subtorus_search_exact(const MarkedTorus& t);
/// Search for pairs of integer vectors (|entries| <= bound) with
/// C-proportional images.
std::optional<SubtorusCertificate> subtorus_search_heuristic(const MarkedTorus& t, int bound,
                                                             double tol = 1e-7);

struct GenericityParams {
  int bound = 10;
  double tol = 1e-7;
};

enum class Verdict { NonGeneric, NoObstructionFound };

struct GenericityReport {
  Verdict verdict = Verdict::NoObstructionFound;
  bool exact = false;
  int bound = 0;
  std::optional<SubtorusCertificate> subtorus;
  std::optional<PPCertificate> pp_class;
};

/// Subtorus search, then (1,1) and (2,2) class searches; stops at the first
/// witness. Throws DimensionTooSmall for n < 3.
GenericityReport is_generic(const MarkedTorus& t, const GenericityParams& params = {});

}  // namespace toruskit
