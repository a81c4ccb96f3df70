#pragma once

// Shared helpers and independent oracles for the test suite. Everything in
// here stays off the implementation paths it is used to check: the mesh
// oracle builds the L-shape directly from the grid, eigenvalues are checked
// against characteristic-polynomial roots, and block solves go through the
// densified system.

#include "fourmg/assembly.hpp"
#include "fourmg/block.hpp"
#include "fourmg/dense.hpp"
#include "fourmg/mesh.hpp"
#include "fourmg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <set>
#include <tuple>
#include <vector>

namespace testsup {

using namespace fourmg;

// ---- L-shape oracle -------------------------------------------------------

struct GridMesh {
  std::vector<std::pair<double, double>> vertices;
  std::set<std::array<int, 3>> triangles; // canonical sorted vertex triples
};

// Direct enumeration of the level-l mesh: grid points of step 2^-l minus the
// open upper-right quadrant, cells split along the lower-left -> upper-right
// diagonal. Independent of refine_uniform.
inline GridMesh lshape_grid_oracle(int level) {
  const int n = 1 << (level + 1); // cells per side on (-1,1)
  const double h = 2.0 / n;
  GridMesh g;
  std::map<std::pair<int, int>, int> id;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double x = -1.0 + i * h;
      const double y = -1.0 + j * h;
      if (x > 0.0 && y > 0.0) continue;
      id[{i, j}] = static_cast<int>(g.vertices.size());
      g.vertices.push_back({x, y});
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x0 = -1.0 + i * h;
      const double y0 = -1.0 + j * h;
      if (x0 >= 0.0 && y0 >= 0.0) continue; // removed quadrant
      int ll = id.at({i, j}), lr = id.at({i + 1, j});
      int ul = id.at({i, j + 1}), ur = id.at({i + 1, j + 1});
      std::array<int, 3> t1{ll, lr, ur}, t2{ll, ur, ul};
      std::sort(t1.begin(), t1.end());
      std::sort(t2.begin(), t2.end());
      g.triangles.insert(t1);
      g.triangles.insert(t2);
    }
  }
  return g;
}

// ---- characteristic polynomial eigenvalue oracle --------------------------

// Faddeev-LeVerrier: coefficients of det(xI - A) = x^n + c1 x^(n-1) + ... + cn
inline std::vector<double> char_poly_coeffs(const DenseMatrix& A) {
  const int n = A.rows;
  DenseMatrix m = DenseMatrix::identity(n);
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    m = A.multiply(m);
    c[k] = -m.trace() / k;
    for (int i = 0; i < n; ++i) m(i, i) += c[k];
  }
  return c;
}

// Durand-Kerner simultaneous root iteration (monic polynomial).
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  auto eval = [&](std::complex<double> z) {
    std::complex<double> p = c[0];
    for (int k = 1; k <= n; ++k) p = p * z + c[k];
    return p;
  };
  std::vector<std::complex<double>> r(n);
  for (int i = 0; i < n; ++i) r[i] = std::pow(std::complex<double>(0.4, 0.9), i);
  for (int it = 0; it < 500; ++it) {
    double shift = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> d = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) d *= r[i] - r[j];
      std::complex<double> step = eval(r[i]) / d;
      r[i] -= step;
      shift = std::max(shift, std::abs(step));
    }
    if (shift < 1e-14) break;
  }
  return r;
}

// Greedy multiset match: max over pairs of min distances.
inline double multiset_distance(std::vector<std::complex<double>> a,
                                std::vector<std::complex<double>> b) {
  double worst = 0.0;
  for (const auto& x : a) {
    double best = 1e300;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (std::abs(x - b[j]) < best) {
        best = std::abs(x - b[j]);
        arg = j;
      }
    }
    worst = std::max(worst, best);
    b.erase(b.begin() + arg);
  }
  return worst;
}

// ---- problem builders ------------------------------------------------------

inline DiscreteProblem toy_problem(double m, double a, double b, double tau) {
  auto sys = std::make_shared<DiscreteSystem>();
  TripletBuilder tm(1, 1), ta(1, 1), tb(1, 1);
  tm.add(0, 0, m);
  ta.add(0, 0, a);
  tb.add(0, 0, b);
  sys->M = tm.build();
  sys->A = ta.build();
  sys->B = tb.build();
  sys->Mbar.d = {m};
  sys->load = {1.0};
  sys->gs_order = {0};
  sys->dofs.free = {0};
  sys->dofs.index_of = {0};
  sys->dofs.n_free = 1;
  return DiscreteProblem{sys, tau};
}

inline DiscreteProblem example_fe_problem(int level, double tau, int which = 1,
                                          BcKind bc = BcKind::AllDirichlet) {
  ProblemSpec spec = example_problem(which, bc);
  return build_problem(level, spec.bc, spec.a, spec.b, tau);
}

inline DiscreteProblem unit_fe_problem(int level, double tau) {
  return build_problem(level, BcSpec{}, Coefficient::constant(1.0), Coefficient::constant(1.0),
                       tau);
}

// Reference triangle (0,0),(1,0),(0,1) with every vertex free.
inline std::pair<Mesh, DofMap> reference_triangle() {
  Mesh mesh;
  mesh.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  mesh.triangles = {{0, 1, 2}};
  mesh.level = 0;
  DofMap dofs;
  dofs.free = {0, 1, 2};
  dofs.fixed = {};
  dofs.index_of = {0, 1, 2};
  dofs.n_free = 3;
  return {mesh, dofs};
}

// Dense-LU solution of the full block system (the solver-correctness oracle).
inline Vec dense_block_solve(const DiscreteProblem& p, const Vec& rhs) {
  DenseMatrix a = build_block(p, BlockVariant::A).densify();
  return DenseLU::factor(a).solve(rhs);
}

inline Vec block_rhs(const DiscreteProblem& p) {
  Vec rhs(2 * static_cast<std::size_t>(p.n()), 0.0);
  std::copy(p.sys->load.begin(), p.sys->load.end(), rhs.begin());
  return rhs;
}

inline double rel_diff(const Vec& a, const Vec& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

} // namespace testsup
