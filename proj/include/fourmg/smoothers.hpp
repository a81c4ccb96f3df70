#pragma once

#include "fourmg/block.hpp"

namespace fourmg {

struct SmootherConfig {
  enum class Kind { CollectiveJacobi, CollectiveGS, Distributive };
  Kind kind = Kind::CollectiveGS;
  double theta = 0.8;    // collective Jacobi damping
  double omega = 0.5;    // damped Jacobi weight inside the distributive sweep
  int gs_sweeps = 1;     // inner scalar Gauss-Seidel sweeps (distributive)
  int jacobi_sweeps = 1; // inner damped Jacobi sweeps (distributive)
};

/// Inverted 2x2 point blocks [[tl_ii, tr_ii], [bl_ii, br_ii]] of a block
/// operator; inv holds (i00,i01,i10,i11) per point.
struct PointBlockDiag {
  std::vector<double> inv;
};

/// Throws when a point block is singular.
PointBlockDiag invert_point_blocks(const BlockOperator& op);

/// One collective damped Jacobi sweep: all 2x2 corrections are computed
/// from the residual of the input x. work must hold 2n entries.
void collective_jacobi_sweep(const BlockOperator& op, const PointBlockDiag& D, Vec& x,
                             const Vec& rhs, double theta, Vec& work);

/// One collective Gauss-Seidel sweep, each 2x2 solve using the latest
/// values of every other unknown. Points are visited in ascending index
/// order, or in the given permutation when order is non-null (the
/// multigrid hierarchy passes the coarse-first order of the level);
/// reverse walks the chosen order backwards.
void collective_gs_sweep(const BlockOperator& op, const PointBlockDiag& D, Vec& x,
                         const Vec& rhs, const std::vector<int>* order = nullptr,
                         bool reverse = false);

/// One scalar Gauss-Seidel sweep on (scale*S) x = rhs, ascending rows.
void scalar_gs_sweep(const SparseMatrix& S, double scale, const double* rhs, double* x);
void scalar_gs_sweep(const SparseMatrix& S, double scale, const Vec& rhs, Vec& x);

struct DistributiveWork {
  Vec r;  // 2n
  Vec ey; // n
  Vec ex; // n
  Vec t0; // n
  Vec t1; // n
  void resize(int n) {
    r.resize(2 * static_cast<std::size_t>(n));
    ey.resize(n);
    ex.resize(n);
    t0.resize(n);
    t1.resize(n);
  }
};

/// One distributive relaxation on the target system (variant B or Btilde):
/// residual, scalar GS on -tau B e_y = r_u, damped Jacobi on the transformed
/// equation for e_x (diagonal from schur_diagonal), change of variables
/// e_v = tau Mbar^-1 B e_x, e_u = e_x + e_y, update. Inner solves start from
/// zero. Throws for tau = 0 and for target variants other than B/Btilde.
void distributive_sweep(const DiscreteProblem& problem, BlockVariant target,
                        const BlockOperator& op, const DiagonalMatrix& schur_diag, Vec& x,
                        const Vec& rhs, const SmootherConfig& cfg, DistributiveWork& work);

} // namespace fourmg
