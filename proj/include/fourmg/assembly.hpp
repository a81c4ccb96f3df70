#pragma once

#include "fourmg/mesh.hpp"
#include "fourmg/sparse.hpp"

#include <functional>
#include <memory>

namespace fourmg {

/// Scalar diffusion coefficient field. The two built-in test problems:
/// problem 1 pairs a constant field with a piecewise constant jump along
/// x2 = x1; problem 2 pairs a field degenerating at the origin with an
/// oscillatory one.
struct Coefficient {
  enum class Kind { Constant, NiceA, NiceB, DegenerateA, DegenerateB, Custom };
  Kind kind = Kind::Constant;
  double value = 1.0;
  std::function<double(double, double)> fn;

  double operator()(double x1, double x2) const;

  static Coefficient constant(double c) { return {Kind::Constant, c, nullptr}; }
  static Coefficient nice_a() { return {Kind::NiceA, 0.0, nullptr}; }
  static Coefficient nice_b() { return {Kind::NiceB, 0.0, nullptr}; }
  static Coefficient degenerate_a() { return {Kind::DegenerateA, 0.0, nullptr}; }
  static Coefficient degenerate_b() { return {Kind::DegenerateB, 0.0, nullptr}; }
  static Coefficient custom(std::function<double(double, double)> f) {
    return {Kind::Custom, 0.0, std::move(f)};
  }
};

/// Mesh, boundary data and the matrices of one discretization level.
/// Immutable once built; shared across solves and across tau values.
struct DiscreteSystem {
  std::shared_ptr<const Mesh> mesh;
  DofMap dofs;
  SparseMatrix M; // mass
  SparseMatrix A; // stiffness for coefficient a
  SparseMatrix B; // stiffness for coefficient b
  DiagonalMatrix Mbar;
  Vec load; // vertex-quadrature load vector for f = 1
  // Gauss-Seidel visit order: vertices of coarser refinement generations
  // first (the numbering a hierarchical mesh code sweeps in), which
  // measurably beats the lexicographic sweep as a multigrid smoother.
  std::vector<int> gs_order;

  int n() const { return dofs.n_free; }
};

/// One time-step problem: a discretization plus tau = sqrt(dt).
struct DiscreteProblem {
  std::shared_ptr<const DiscreteSystem> sys;
  double tau = 1.0;

  int n() const { return sys->n(); }
};

/// P1 mass matrix on the free DOFs. Element matrix (|K|/12)[[2,1,1],[1,2,1],[1,1,2]].
SparseMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs);

/// P1 stiffness matrix on the free DOFs with the coefficient evaluated at
/// each triangle barycenter (one-point quadrature). Throws when the
/// quadrature value is nonpositive, naming the triangle.
SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& dofs, const Coefficient& c);

/// Vertex-quadrature lumped mass: Mbar_ii = sum over triangles containing
/// free vertex i of |K|/3. Counts triangles whose other vertices are fixed,
/// so Mbar dominates M near the Dirichlet boundary as well.
DiagonalMatrix lump(const SparseMatrix& M, const Mesh& mesh, const DofMap& dofs);

/// Plain row-sum lumping of an arbitrary matrix (testing/toy systems).
DiagonalMatrix lump_rowsum(const SparseMatrix& M);

/// Load vector for f = 1 by vertex quadrature: F_i = sum incident |K|/3.
Vec unit_load_vector(const Mesh& mesh, const DofMap& dofs);

DiscreteSystem build_system(std::shared_ptr<const Mesh> mesh, const BcSpec& bc,
                            const Coefficient& a, const Coefficient& b);

DiscreteProblem build_problem(int level, const BcSpec& bc, const Coefficient& a,
                              const Coefficient& b, double tau);

struct ProblemSpec {
  Coefficient a;
  Coefficient b;
  BcSpec bc;
};

/// which = 1 or 2 selects the built-in coefficient pairs above.
ProblemSpec example_problem(int which, BcKind bc = BcKind::AllDirichlet);

} // namespace fourmg
