#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "fourmg/spectrum.hpp"

#include <sstream>

using namespace fourmg;

TEST_CASE("estimate_C1") {
  SUBCASE("lumping equal to the mass gives 1") {
    auto p = testsup::toy_problem(0.4, 1.0, 1.0, 1.0);
    CHECK(estimate_C1(p.sys->M, p.sys->Mbar) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("finite element meshes give a constant in (0,1), stable across levels") {
    double prev = -1.0;
    for (int level : {2, 3, 4}) {
      auto p = testsup::example_fe_problem(level, 1.0);
      const double c1 = estimate_C1(p.sys->M, p.sys->Mbar);
      CHECK(c1 > 0.0);
      CHECK(c1 < 1.0);
      if (prev > 0.0) {
        CHECK(c1 / prev <= 1.2);
        CHECK(prev / c1 <= 1.2);
      }
      prev = c1;
    }
  }
}

TEST_CASE("an exact preconditioner collapses the spectrum onto 1") {
  auto p = testsup::example_fe_problem(2, 1e-1);
  SpectrumReport rep = preconditioned_spectrum(p, BlockVariant::A);
  REQUIRE(rep.eigenvalues.size() == 2 * static_cast<std::size_t>(p.n()));
  for (const auto& ev : rep.eigenvalues) CHECK(std::abs(ev - 1.0) <= 1e-10);
  CHECK(rep.all_satisfied());
}

TEST_CASE("all-lumped preconditioner keeps the spectral radius below 2") {
  for (int level : {2, 3}) {
    const double h2 = std::ldexp(1.0, -2 * level);
    for (double tau : {1.0, 1e-1, 1e-2, h2}) {
      auto p = testsup::example_fe_problem(level, tau);
      SpectrumReport rep = preconditioned_spectrum(p, BlockVariant::B);
      CHECK(rep.rho < 2.0);
      CHECK(rep.all_satisfied());
    }
  }
}

TEST_CASE("one-lumped preconditioner with equal stiffness: real spectrum in (C1, 1]") {
  for (double tau : {1e-1, 1e-3}) {
    auto p = testsup::unit_fe_problem(2, tau);
    SpectrumReport rep = preconditioned_spectrum(p, BlockVariant::Btilde);
    CHECK(rep.C1 > 0.0);
    CHECK(rep.C1 < 1.0);
    REQUIRE(rep.checks.size() == 2);
    CHECK(rep.checks[0].satisfied); // interval containment
    CHECK(rep.checks[1].satisfied); // multiplicity of eigenvalue 1
    int mult = 0;
    for (const auto& ev : rep.eigenvalues)
      if (std::abs(ev - 1.0) <= 1e-7) mult++;
    CHECK(mult >= p.n());
  }
}

TEST_CASE("spectrum of the reduced operator X") {
  SUBCASE("single dof: lumping is exact, X vanishes") {
    auto p = testsup::toy_problem(0.7, 2.0, 2.0, 1.0);
    SpectrumReport rep = spectrum_of_X(p);
    CHECK(rep.rho <= 1e-14);
  }
  SUBCASE("interval containment at level 2") {
    auto p = testsup::unit_fe_problem(2, 1e-1);
    SpectrumReport rep = spectrum_of_X(p);
    CHECK(rep.all_satisfied());
    for (const auto& ev : rep.eigenvalues) {
      CHECK(ev.real() > rep.C1 - 1.0 - 1e-9);
      CHECK(ev.real() <= 1e-9);
    }
  }
  SUBCASE("large tau drives X to zero") {
    auto p = testsup::unit_fe_problem(2, 1e3);
    SpectrumReport rep = spectrum_of_X(p);
    CHECK(rep.rho < 1e-3);
  }
  SUBCASE("different coefficients are rejected") {
    auto p = testsup::example_fe_problem(2, 1e-1); // a != b
    CHECK_THROWS_AS(spectrum_of_X(p), std::invalid_argument);
  }
}

TEST_CASE("block-diagonal preconditioner bound") {
  SUBCASE("tau = 0 gives the identity") {
    auto p = testsup::example_fe_problem(2, 0.0);
    SpectrumReport rep = verify_bd_bound(p);
    CHECK(rep.rho <= 1e-12);
    for (const auto& ev : rep.eigenvalues) CHECK(std::abs(ev - 1.0) <= 1e-10);
  }
  SUBCASE("small tau keeps rho(E_d) below 1 and scales linearly") {
    auto p7 = testsup::example_fe_problem(2, 1e-7);
    SpectrumReport r7 = verify_bd_bound(p7);
    CHECK(r7.rho < 1.0);
    CHECK(r7.all_satisfied());
    auto p6 = testsup::example_fe_problem(2, 1e-6);
    SpectrumReport r6 = verify_bd_bound(p6);
    CHECK(r6.rho / r7.rho == doctest::Approx(10.0).epsilon(0.01));
  }
}

TEST_CASE("eigenvector identity for the deviation from 1") {
  for (double tau : {1.0, 1e-2}) {
    auto p = testsup::example_fe_problem(2, tau);
    BoundCheck c = lambda_deviation_identity(p);
    CHECK(c.satisfied);
  }
}

TEST_CASE("algebraic rank-update identity") {
  SUBCASE("zero factors: the projected inverse vanishes") {
    // V^T (A + U V^T)^-1 U with U = V = 0 is the zero matrix
    const int n = 6, k = 2;
    DenseMatrix a = DenseMatrix::identity(n);
    for (int i = 0; i < n; ++i) a(i, i) = 2.0 + i;
    DenseMatrix u(n, k), v(n, k);
    DenseMatrix x = u;
    DenseLU::factor(a).solve_inplace(x.a.data(), k);
    DenseMatrix lhs = v.transpose().multiply(x);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) CHECK(lhs(i, j) == 0.0);
  }
  SUBCASE("scalar case reduces to an exact fraction") {
    double dev = 0.0;
    CHECK(smw_identity_holds(1, 1, 5, 1e-12, &dev));
    CHECK(dev <= 1e-12);
  }
  SUBCASE("20 random instances to 1e-9") {
    for (int i = 0; i < 20; ++i) {
      double dev = 0.0;
      const int n = 10 + (i % 4) * 10;
      const int k = 1 + (i % 7);
      CHECK(smw_identity_holds(n, k, 1000 + i, 1e-9, &dev));
      CHECK(dev <= 1e-9);
    }
  }
}

TEST_CASE("spectrum csv layout") {
  auto p = testsup::unit_fe_problem(2, 1e-1);
  SpectrumReport rep = preconditioned_spectrum(p, BlockVariant::Btilde);
  std::ostringstream out;
  write_spectrum_csv_header(out);
  write_spectrum_csv(out, rep, p.sys->mesh->h(), p.tau, "Btilde");
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "re,im,h,tau,precond");
  int rows = 0;
  while (std::getline(in, line)) rows++;
  CHECK(rows == 2 * p.n());
}

TEST_CASE("dense cap is enforced") {
  auto p = testsup::example_fe_problem(2, 1e-1);
  CHECK_THROWS_AS(preconditioned_spectrum(p, BlockVariant::B, 10), std::invalid_argument);
  CHECK_THROWS_AS(spectrum_of_X(testsup::unit_fe_problem(2, 1e-1), 10), std::invalid_argument);
}
