#pragma once

#include "fourmg/block.hpp"
#include "fourmg/report.hpp"
#include "fourmg/smoothers.hpp"

#include <cstdint>
#include <memory>

namespace fourmg {

enum class CycleType { V, W };

/// Discretization of one level plus the grid transfer from the level below.
/// Each level is assembled from its own mesh (re-discretization, not a
/// Galerkin product); prolongation is linear interpolation on free DOFs and
/// restriction is its transpose, stored explicitly.
struct MGLevelData {
  std::shared_ptr<const DiscreteSystem> sys;
  SparseMatrix P; // coarse free -> fine free; empty rows/cols on the coarsest level
  SparseMatrix R; // P transposed
  int level = 0;  // mesh refinement depth
};

using LevelChain = std::vector<std::shared_ptr<const MGLevelData>>; // coarse -> fine

/// Builds meshes coarse_level..fine_level by successive uniform refinement
/// and assembles every level. Throws when the coarsest level has no free
/// DOFs (level 0 with all-Dirichlet boundary).
LevelChain build_level_chain(const ProblemSpec& spec, int coarse_level, int fine_level);

struct MGLevelSystem {
  std::shared_ptr<const MGLevelData> data;
  DiscreteProblem problem;
  BlockOperator op;          // target operator on this level
  PointBlockDiag pb;         // 2x2 point-block inverses (collective smoothers)
  DiagonalMatrix schur_diag; // distributive smoother only
};

struct MGHierarchy {
  std::vector<MGLevelSystem> levels; // coarse -> fine
  DenseLU coarse_lu;                 // dense factorization of the coarsest target
  SmootherConfig smoother;
  CycleType cycle = CycleType::V;
  int pre = 1;
  int post = 1;
  double tau = 1.0;
  BlockVariant target = BlockVariant::A;

  int fine_n() const { return levels.back().op.n; }
  const BlockOperator& fine_op() const { return levels.back().op; }
};

MGHierarchy build_hierarchy(const LevelChain& chain, double tau, BlockVariant target,
                            const SmootherConfig& smoother, CycleType cycle, int pre, int post);

/// Per-solve mutable state; hierarchies stay immutable so concurrent solves
/// can share them.
struct MGWork {
  struct Entry {
    Vec x, rhs, r;
  };
  std::vector<Entry> lv;
  Vec tmp; // collective Jacobi scratch, fine size
  DistributiveWork dgs;

  static MGWork create(const MGHierarchy& h);
};

/// One multigrid cycle for the fine-level system with right-hand side rhs
/// and initial iterate x (both length 2 N_h).
Vec mg_cycle(const MGHierarchy& h, const Vec& rhs, const Vec& x);

/// In-place cycle on the fine-level vectors held in work.
void mg_cycle_inplace(const MGHierarchy& h, MGWork& work);

/// Preconditioner action: one cycle from a zero initial guess, out = cycle(0, r).
void mg_precondition(const MGHierarchy& h, MGWork& work, const Vec& r, Vec& out);

/// Iterates cycles from a seeded random initial guess (entries uniform in
/// [0,1)) until ||rhs - Op x||_2 / ||r_0||_2 < tol or maxit cycles.
SolveReport mg_solve(const MGHierarchy& h, const Vec& rhs, double tol, int maxit,
                     std::uint64_t seed, Vec* solution = nullptr);

} // namespace fourmg
