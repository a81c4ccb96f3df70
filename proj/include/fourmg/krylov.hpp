#pragma once

#include "fourmg/report.hpp"
#include "fourmg/sparse.hpp"

#include <functional>
#include <utility>

namespace fourmg {

using LinOp = std::function<void(const Vec& in, Vec& out)>;

/// Flexible GMRes without restart, right preconditioning: Arnoldi with
/// modified Gram-Schmidt, Givens least squares, preconditioned basis
/// vectors stored so apply_P may vary between iterations (one inexact
/// multigrid cycle is the intended use). Stops when the rotated residual
/// drops below tol * ||r_0||; happy breakdown counts as exact convergence.
std::pair<Vec, SolveReport> fgmres(const LinOp& apply_A, const LinOp& apply_P, const Vec& rhs,
                                   const Vec& x0, double tol, int maxit);

inline LinOp identity_op() {
  return [](const Vec& in, Vec& out) { out = in; };
}

} // namespace fourmg
