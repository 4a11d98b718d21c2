#pragma once

#include <vector>

#include <Eigen/Dense>

namespace toruskit {

using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// LLL reduction of the lattice spanned by the rows of `basis`, in extended
/// precision. Rows are combined by integer operations only, so integer
/// columns stay integral.
LMat lll_reduce(LMat basis, long double delta = 0.99L);

/// Integer vectors w (|w_i| small) with ||K w|| ~ 0, found by reducing the
/// rows (e_j, scale * K e_j). Returns the integer parts of the reduced rows
/// whose scaled tail is below `rel_tol * ||w||`, shortest first.
std::vector<Eigen::VectorXd> integer_relations(const Eigen::MatrixXd& k, double scale,
                                               double rel_tol);

}  // namespace toruskit
