#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "fourmg/assembly.hpp"
#include "fourmg/kernels.hpp"

using namespace fourmg;

TEST_CASE("coefficients evaluate to the published fields") {
  CHECK(Coefficient::nice_a()(0.3, -0.8) == 1.0);
  CHECK(Coefficient::nice_b()(0.5, 0.2) == 0.6);  // below x2 = x1
  CHECK(Coefficient::nice_b()(-0.5, 0.2) == 1.2); // above
  CHECK(Coefficient::degenerate_a()(-0.5, 0.25) == doctest::Approx(0.3));
  CHECK(Coefficient::degenerate_b()(0.1, 0.0625) ==
        doctest::Approx(10.0 + 3.0 * std::sin(0.5 * M_PI) * std::sin(0.5 * M_PI)));
  CHECK(Coefficient::constant(4.5)(0.0, 0.0) == 4.5);
  CHECK(Coefficient::custom([](double x, double y) { return x + y; })(1.0, 2.0) == 3.0);
}

TEST_CASE("mass element matrix on the reference triangle") {
  auto [mesh, dofs] = testsup::reference_triangle();
  SparseMatrix m = assemble_mass(mesh, dofs);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(m.at(i, j) == doctest::Approx(i == j ? 1.0 / 12 : 1.0 / 24).epsilon(1e-14));
}

TEST_CASE("stiffness element matrix on the reference triangle, coefficient 1") {
  auto [mesh, dofs] = testsup::reference_triangle();
  SparseMatrix a = assemble_stiffness(mesh, dofs, Coefficient::constant(1.0));
  const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(a.at(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-14));
}

TEST_CASE("interior stiffness row is the five-point stencil") {
  // assemble-and-inspect on the level-2 mesh: vertex (-1/2,-1/2) has the
  // full six-triangle star
  Mesh mesh = build_lshape_mesh(2);
  DofMap dofs = classify_dofs(mesh, BcSpec{});
  SparseMatrix a = assemble_stiffness(mesh, dofs, Coefficient::constant(1.0));
  int center = -1;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (mesh.vertices[v].x == -0.5 && mesh.vertices[v].y == -0.5) center = dofs.index_of[v];
  REQUIRE(center >= 0);
  const double h = mesh.h();
  auto at_offset = [&](double dx, double dy) {
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (mesh.vertices[v].x == -0.5 + dx * h && mesh.vertices[v].y == -0.5 + dy * h)
        return a.at(center, dofs.index_of[v]);
    return -1e300;
  };
  CHECK(at_offset(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(at_offset(1, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(at_offset(-1, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(at_offset(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(at_offset(0, -1) == doctest::Approx(-1.0).epsilon(1e-14));
  // diagonal neighbours along the cell diagonal cancel but stay stored
  CHECK(at_offset(1, 1) == doctest::Approx(0.0));
  CHECK(at_offset(-1, -1) == doctest::Approx(0.0));
}

TEST_CASE("piecewise coefficient scales whole triangles below the diagonal") {
  // a triangle strictly below x2 = x1 picks up the 0.6 branch exactly
  Mesh mesh;
  mesh.vertices = {{0.2, -0.9}, {0.9, -0.9}, {0.9, -0.2}};
  mesh.triangles = {{0, 1, 2}};
  DofMap dofs{{0, 1, 2}, {}, {0, 1, 2}, 3};
  SparseMatrix unit = assemble_stiffness(mesh, dofs, Coefficient::constant(1.0));
  SparseMatrix jump = assemble_stiffness(mesh, dofs, Coefficient::nice_b());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(jump.at(i, j) == doctest::Approx(0.6 * unit.at(i, j)).epsilon(1e-14));
}

TEST_CASE("nonpositive coefficient at a barycenter is rejected with the triangle id") {
  auto [mesh, dofs] = testsup::reference_triangle();
  CHECK_THROWS_WITH_AS(assemble_stiffness(mesh, dofs, Coefficient::constant(-1.0)),
                       doctest::Contains("triangle 0"), std::runtime_error);
}

TEST_CASE("mass matrix is SPD on the level-2 mesh") {
  auto p = testsup::example_fe_problem(2, 1.0);
  // positive spectrum is the SPD oracle
  Vec w = sym_eigenvalues(DenseMatrix::from_sparse(p.sys->M));
  CHECK(w.front() > 0.0);
  w = sym_eigenvalues(DenseMatrix::from_sparse(p.sys->A));
  CHECK(w.front() > 0.0);
  w = sym_eigenvalues(DenseMatrix::from_sparse(p.sys->B));
  CHECK(w.front() > 0.0);
  std::mt19937_64 gen(5);
  for (int t = 0; t < 100; ++t) {
    Vec x(p.n());
    for (auto& v : x) v = 2.0 * uniform01(gen) - 1.0;
    Vec mx = p.sys->M.apply(x);
    CHECK(kernels::dot(x.size(), x.data(), mx.data()) > 0.0);
  }
}

TEST_CASE("row sums of boundary-free rows equal a third of the star area") {
  // interior vertex with no fixed neighbours: row sum = sum of adjacent
  // areas / 3 (partition of unity)
  Mesh mesh = build_lshape_mesh(3);
  DofMap dofs = classify_dofs(mesh, BcSpec{});
  SparseMatrix m = assemble_mass(mesh, dofs);
  int vid = -1;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (mesh.vertices[v].x == -0.5 && mesh.vertices[v].y == -0.5) vid = v;
  REQUIRE(vid >= 0);
  double star = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t)
    for (int corner : mesh.triangles[t])
      if (corner == vid) star += mesh.triangle_area(t);
  const int i = dofs.index_of[vid];
  double row_sum = 0.0;
  for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) row_sum += m.val[k];
  CHECK(row_sum == doctest::Approx(star / 3.0).epsilon(1e-13));
}

TEST_CASE("lumped mass") {
  SUBCASE("reference triangle gives |K|/3 per vertex") {
    auto [mesh, dofs] = testsup::reference_triangle();
    SparseMatrix m = assemble_mass(mesh, dofs);
    DiagonalMatrix mbar = lump(m, mesh, dofs);
    for (int i = 0; i < 3; ++i) CHECK(mbar.d[i] == doctest::Approx(1.0 / 6).epsilon(1e-15));
  }
  SUBCASE("interior vertex of a uniform mesh gives h^2") {
    Mesh mesh = build_lshape_mesh(3);
    DofMap dofs = classify_dofs(mesh, BcSpec{});
    SparseMatrix m = assemble_mass(mesh, dofs);
    DiagonalMatrix mbar = lump(m, mesh, dofs);
    int vid = -1;
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (mesh.vertices[v].x == -0.5 && mesh.vertices[v].y == -0.5) vid = v;
    CHECK(mbar.d[dofs.index_of[vid]] == doctest::Approx(mesh.h() * mesh.h()).epsilon(1e-14));
  }
  SUBCASE("row-sum lumping of a diagonal matrix is the matrix itself") {
    TripletBuilder b(1, 1);
    b.add(0, 0, 0.37);
    DiagonalMatrix d = lump_rowsum(b.build());
    CHECK(d.d[0] == 0.37);
  }
}

TEST_CASE("load vector for f = 1 matches the vertex quadrature") {
  Mesh mesh = build_lshape_mesh(2);
  DofMap dofs = classify_dofs(mesh, BcSpec{});
  SparseMatrix m = assemble_mass(mesh, dofs);
  Vec f = unit_load_vector(mesh, dofs);
  DiagonalMatrix mbar = lump(m, mesh, dofs);
  REQUIRE(f.size() == mbar.d.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == doctest::Approx(mbar.d[i]));
}

TEST_CASE("norm equivalence: lumping dominates the consistent mass") {
  for (int level : {2, 3}) {
    auto p = testsup::example_fe_problem(level, 1.0);
    const auto& s = *p.sys;
    std::mt19937_64 gen(17);
    const double c1 =
        sym_generalized_eig_extremes(DenseMatrix::from_sparse(s.M), s.Mbar).first;
    CHECK(c1 > 0.0);
    CHECK(c1 < 1.0);
    for (int t = 0; t < 200; ++t) {
      Vec u(s.n());
      for (auto& v : u) v = 2.0 * uniform01(gen) - 1.0;
      Vec mu = s.M.apply(u);
      const double consistent = kernels::dot(u.size(), u.data(), mu.data());
      double lumped = 0.0;
      for (int i = 0; i < s.n(); ++i) lumped += s.Mbar.d[i] * u[i] * u[i];
      CHECK(consistent - lumped <= 1e-12);
      CHECK(c1 * lumped - consistent <= 1e-10 * lumped);
    }
  }
}

TEST_CASE("stiffness and mass eigenvalue scaling across levels 2-4") {
  std::vector<double> amax, mmin_h2;
  for (int level : {2, 3, 4}) {
    auto p = testsup::example_fe_problem(level, 1.0);
    Vec aeig = sym_eigenvalues(DenseMatrix::from_sparse(p.sys->A));
    Vec meig = sym_eigenvalues(DenseMatrix::from_sparse(p.sys->M));
    const double h2 = p.sys->mesh->h() * p.sys->mesh->h();
    amax.push_back(aeig.back());
    mmin_h2.push_back(meig.front() / h2);
  }
  for (std::size_t i = 1; i < amax.size(); ++i) {
    CHECK(amax[i] / amax[0] <= 1.5);
    CHECK(amax[i] / amax[0] >= 0.5);
    const double r = mmin_h2[i] / mmin_h2[i - 1];
    CHECK(r >= 0.5);
    CHECK(r <= 2.0);
  }
}
