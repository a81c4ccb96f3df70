#include "fourmg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace fourmg {

double Coefficient::operator()(double x1, double x2) const {
  switch (kind) {
    case Kind::Constant:
      return value;
    case Kind::NiceA:
      return 1.0;
    case Kind::NiceB:
      return x2 < x1 ? 0.6 : 1.2;
    case Kind::DegenerateA:
      return 0.1 * std::abs(x1) + std::abs(x2);
    case Kind::DegenerateB:
      return 10.0 + 3.0 * std::sin(5.0 * M_PI * x1) * std::sin(8.0 * M_PI * x2);
    case Kind::Custom:
      return fn(x1, x2);
  }
  return 0.0;
}

SparseMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs) {
  TripletBuilder b(dofs.n_free, dofs.n_free);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double area = mesh.triangle_area(t);
    const auto& tri = mesh.triangles[t];
    for (int r = 0; r < 3; ++r) {
      int i = dofs.index_of[tri[r]];
      if (i < 0) continue;
      for (int c = 0; c < 3; ++c) {
        int j = dofs.index_of[tri[c]];
        if (j < 0) continue;
        b.add(i, j, (area / 12.0) * (r == c ? 2.0 : 1.0));
      }
    }
  }
  return b.build();
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& dofs, const Coefficient& c) {
  TripletBuilder b(dofs.n_free, dofs.n_free);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vertex& p0 = mesh.vertices[tri[0]];
    const Vertex& p1 = mesh.vertices[tri[1]];
    const Vertex& p2 = mesh.vertices[tri[2]];
    const double area = mesh.triangle_area(t);
    const double cq = c((p0.x + p1.x + p2.x) / 3.0, (p0.y + p1.y + p2.y) / 3.0);
    if (!(cq > 0.0))
      throw std::runtime_error("assemble_stiffness: nonpositive coefficient at barycenter of triangle " +
                               std::to_string(t));
    // Edge vectors opposite each vertex; S_rc = c * (e_r . e_c) / (4|K|).
    const double ex[3] = {p2.x - p1.x, p0.x - p2.x, p1.x - p0.x};
    const double ey[3] = {p2.y - p1.y, p0.y - p2.y, p1.y - p0.y};
    for (int r = 0; r < 3; ++r) {
      int i = dofs.index_of[tri[r]];
      if (i < 0) continue;
      for (int cc = 0; cc < 3; ++cc) {
        int j = dofs.index_of[tri[cc]];
        if (j < 0) continue;
        b.add(i, j, cq * (ex[r] * ex[cc] + ey[r] * ey[cc]) / (4.0 * area));
      }
    }
  }
  return b.build();
}

DiagonalMatrix lump(const SparseMatrix& M, const Mesh& mesh, const DofMap& dofs) {
  if (M.rows != dofs.n_free)
    throw std::invalid_argument("lump: mass matrix does not match dof map");
  DiagonalMatrix d;
  d.d.assign(dofs.n_free, 0.0);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double third = mesh.triangle_area(t) / 3.0;
    for (int v : mesh.triangles[t]) {
      int i = dofs.index_of[v];
      if (i >= 0) d.d[i] += third;
    }
  }
  return d;
}

DiagonalMatrix lump_rowsum(const SparseMatrix& M) {
  DiagonalMatrix d;
  d.d.assign(M.rows, 0.0);
  for (int i = 0; i < M.rows; ++i)
    for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k) d.d[i] += M.val[k];
  return d;
}

Vec unit_load_vector(const Mesh& mesh, const DofMap& dofs) {
  Vec f(dofs.n_free, 0.0);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double third = mesh.triangle_area(t) / 3.0;
    for (int v : mesh.triangles[t]) {
      int i = dofs.index_of[v];
      if (i >= 0) f[i] += third;
    }
  }
  return f;
}

namespace {

// Refinement generation of a grid vertex: the smallest g with both
// coordinates integer multiples of 2^-g. Non-dyadic coordinates land in a
// trailing catch-all bucket.
int dyadic_generation(const Vertex& v, int max_level) {
  for (int g = 0; g <= max_level; ++g) {
    const double s = std::ldexp(1.0, g);
    if (v.x * s == std::floor(v.x * s) && v.y * s == std::floor(v.y * s)) return g;
  }
  return max_level + 1;
}

std::vector<int> coarse_first_order(const Mesh& mesh, const DofMap& dofs) {
  std::vector<int> order(dofs.n_free);
  std::vector<std::pair<int, int>> key(dofs.n_free);
  for (int i = 0; i < dofs.n_free; ++i)
    key[i] = {dyadic_generation(mesh.vertices[dofs.free[i]], mesh.level), i};
  std::sort(key.begin(), key.end());
  for (int i = 0; i < dofs.n_free; ++i) order[i] = key[i].second;
  return order;
}

} // namespace

DiscreteSystem build_system(std::shared_ptr<const Mesh> mesh, const BcSpec& bc,
                            const Coefficient& a, const Coefficient& b) {
  DiscreteSystem sys;
  sys.mesh = std::move(mesh);
  sys.dofs = classify_dofs(*sys.mesh, bc);
  sys.M = assemble_mass(*sys.mesh, sys.dofs);
  sys.A = assemble_stiffness(*sys.mesh, sys.dofs, a);
  sys.B = assemble_stiffness(*sys.mesh, sys.dofs, b);
  sys.Mbar = lump(sys.M, *sys.mesh, sys.dofs);
  sys.load = unit_load_vector(*sys.mesh, sys.dofs);
  sys.gs_order = coarse_first_order(*sys.mesh, sys.dofs);
  return sys;
}

DiscreteProblem build_problem(int level, const BcSpec& bc, const Coefficient& a,
                              const Coefficient& b, double tau) {
  auto mesh = std::make_shared<Mesh>(build_lshape_mesh(level));
  DiscreteProblem p;
  p.sys = std::make_shared<DiscreteSystem>(build_system(mesh, bc, a, b));
  p.tau = tau;
  return p;
}

ProblemSpec example_problem(int which, BcKind bc) {
  ProblemSpec spec;
  spec.bc = {bc};
  if (which == 1) {
    spec.a = Coefficient::nice_a();
    spec.b = Coefficient::nice_b();
  } else if (which == 2) {
    spec.a = Coefficient::degenerate_a();
    spec.b = Coefficient::degenerate_b();
  } else {
    throw std::invalid_argument("example_problem: which must be 1 or 2");
  }
  return spec;
}

} // namespace fourmg
