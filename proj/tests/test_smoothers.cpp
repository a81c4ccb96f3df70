#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "fourmg/kernels.hpp"
#include "fourmg/smoothers.hpp"

using namespace fourmg;

namespace {

double residual_norm(const BlockOperator& op, const Vec& x, const Vec& rhs) {
  Vec r(x.size());
  op.residual(rhs.data(), x.data(), r.data());
  return kernels::nrm2(r.size(), r.data());
}

// asymptotic contraction factor of the stationary iteration x -> sweep(x, 0)
template <class Sweep>
double contraction_factor(const BlockOperator& op, Sweep sweep, int warmup, int measure) {
  Vec x = random_vector(2 * op.n, 99);
  double prev = 0.0, factor = 0.0;
  for (int k = 0; k < warmup + measure; ++k) {
    sweep(x);
    const double norm = kernels::nrm2(x.size(), x.data());
    if (k >= warmup) factor = std::max(factor, norm / prev);
    prev = norm;
    if (norm < 1e-280) break;
  }
  return factor;
}

} // namespace

TEST_CASE("single dof: one damped-Jacobi sweep with full damping solves exactly") {
  auto p = testsup::toy_problem(1.0, 2.0, 3.0, 1.0);
  BlockOperator op = build_block(p, BlockVariant::A);
  PointBlockDiag d = invert_point_blocks(op);
  Vec x = {0.0, 0.0}, rhs = {1.0, 0.0}, work;
  collective_jacobi_sweep(op, d, x, rhs, 1.0, work);
  CHECK(x[0] == doctest::Approx(3.0 / 7).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(1.0 / 7).epsilon(1e-15));

  Vec xg = {0.0, 0.0};
  collective_gs_sweep(op, d, xg, rhs);
  CHECK(xg[0] == doctest::Approx(3.0 / 7).epsilon(1e-15));
  CHECK(xg[1] == doctest::Approx(1.0 / 7).epsilon(1e-15));
}

TEST_CASE("an exact iterate is a fixed point for any damping") {
  auto p = testsup::example_fe_problem(2, 0.1);
  BlockOperator op = build_block(p, BlockVariant::A);
  PointBlockDiag d = invert_point_blocks(op);
  Vec rhs = testsup::block_rhs(p);
  Vec x = testsup::dense_block_solve(p, rhs);
  Vec before = x, work;
  collective_jacobi_sweep(op, d, x, rhs, 0.8, work);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(std::abs(x[i] - before[i]) <= 1e-9 * (1.0 + std::abs(before[i])));
  collective_gs_sweep(op, d, x, rhs);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(std::abs(x[i] - before[i]) <= 1e-9 * (1.0 + std::abs(before[i])));
}

TEST_CASE("damped Jacobi reduces the error against the dense solution every sweep") {
  auto p = testsup::example_fe_problem(2, 1.0);
  BlockOperator op = build_block(p, BlockVariant::A);
  PointBlockDiag d = invert_point_blocks(op);
  Vec rhs = testsup::block_rhs(p);
  Vec exact = testsup::dense_block_solve(p, rhs);
  Vec x = random_vector(2 * p.n(), 4), work;
  double prev = 1e300;
  for (int sweep = 0; sweep < 50; ++sweep) {
    collective_jacobi_sweep(op, d, x, rhs, 0.8, work);
    double err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) err += (x[i] - exact[i]) * (x[i] - exact[i]);
    err = std::sqrt(err);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("forward collective GS solves a block lower-triangular system in one sweep") {
  const int n = 6;
  auto sys = std::make_shared<DiscreteSystem>();
  std::mt19937_64 gen(31);
  TripletBuilder ta(n, n), tb(n, n), tm(n, n);
  for (int i = 0; i < n; ++i) {
    ta.add(i, i, 2.0 + uniform01(gen));
    tb.add(i, i, 1.0 + uniform01(gen));
    tm.add(i, i, 1.0 + uniform01(gen));
    for (int j = 0; j < i; ++j) {
      if (uniform01(gen) < 0.5) continue;
      ta.add(i, j, uniform01(gen) - 0.5);
      tb.add(i, j, uniform01(gen) - 0.5);
      tm.add(i, j, uniform01(gen) - 0.5);
    }
  }
  sys->A = ta.build();
  sys->B = tb.build();
  sys->M = tm.build();
  sys->Mbar = lump_rowsum(sys->M);
  sys->dofs.n_free = n;
  DiscreteProblem p{sys, 1.0};
  BlockOperator op = build_block(p, BlockVariant::A);
  PointBlockDiag d = invert_point_blocks(op);
  Vec rhs = random_vector(2 * n, 32);
  Vec x(2 * n, 0.0);
  collective_gs_sweep(op, d, x, rhs);
  CHECK(residual_norm(op, x, rhs) <= 1e-12 * kernels::nrm2(rhs.size(), rhs.data()));
}

TEST_CASE("error propagation is independent of the right-hand side") {
  auto p = testsup::example_fe_problem(2, 0.01);
  BlockOperator op = build_block(p, BlockVariant::A);
  PointBlockDiag d = invert_point_blocks(op);
  Vec rhs1 = random_vector(2 * p.n(), 51);
  Vec rhs2 = random_vector(2 * p.n(), 52);
  Vec xa = random_vector(2 * p.n(), 53);
  Vec xb = random_vector(2 * p.n(), 54);

  auto difference_after = [&](const Vec& rhs, auto&& sweep) {
    Vec a = xa, b = xb;
    sweep(a, rhs);
    sweep(b, rhs);
    Vec diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    return diff;
  };

  SUBCASE("collective GS") {
    auto sweep = [&](Vec& x, const Vec& rhs) { collective_gs_sweep(op, d, x, rhs); };
    Vec d1 = difference_after(rhs1, sweep);
    Vec d2 = difference_after(rhs2, sweep);
    for (std::size_t i = 0; i < d1.size(); ++i)
      CHECK(d1[i] == doctest::Approx(d2[i]).epsilon(1e-12));
  }
  SUBCASE("collective Jacobi") {
    Vec work;
    auto sweep = [&](Vec& x, const Vec& rhs) {
      collective_jacobi_sweep(op, d, x, rhs, 0.8, work);
    };
    Vec d1 = difference_after(rhs1, sweep);
    Vec d2 = difference_after(rhs2, sweep);
    for (std::size_t i = 0; i < d1.size(); ++i)
      CHECK(d1[i] == doctest::Approx(d2[i]).epsilon(1e-12));
  }
  SUBCASE("distributive") {
    BlockOperator bt = build_block(p, BlockVariant::Btilde);
    DiagonalMatrix sd = schur_diagonal(p);
    DistributiveWork w;
    SmootherConfig cfg;
    auto sweep = [&](Vec& x, const Vec& rhs) {
      distributive_sweep(p, BlockVariant::Btilde, bt, sd, x, rhs, cfg, w);
    };
    Vec d1 = difference_after(rhs1, sweep);
    Vec d2 = difference_after(rhs2, sweep);
    for (std::size_t i = 0; i < d1.size(); ++i)
      CHECK(d1[i] == doctest::Approx(d2[i]).epsilon(1e-12));
  }
}

TEST_CASE("collective GS contracts the residual monotonically and beats damped Jacobi") {
  for (int level : {2, 3}) {
    for (double tau : {1.0, 1e-2}) {
      auto p = testsup::example_fe_problem(level, tau);
      BlockOperator op = build_block(p, BlockVariant::A);
      PointBlockDiag d = invert_point_blocks(op);
      Vec zero(2 * p.n(), 0.0);
      Vec x = random_vector(2 * p.n(), 5);
      double prev = residual_norm(op, x, zero);
      for (int sweep = 0; sweep < 100; ++sweep) {
        collective_gs_sweep(op, d, x, zero);
        const double now = residual_norm(op, x, zero);
        CHECK(now <= prev * (1.0 + 1e-12));
        prev = now;
      }
    }
  }
  // asymptotic factors at level 2
  auto p = testsup::example_fe_problem(2, 1e-2);
  BlockOperator op = build_block(p, BlockVariant::A);
  PointBlockDiag d = invert_point_blocks(op);
  Vec work;
  const double gs_factor = contraction_factor(
      op, [&](Vec& x) { collective_gs_sweep(op, d, x, Vec(x.size(), 0.0)); }, 30, 30);
  const double cj_factor = contraction_factor(
      op,
      [&](Vec& x) { collective_jacobi_sweep(op, d, x, Vec(x.size(), 0.0), 0.8, work); }, 30,
      30);
  CHECK(gs_factor < cj_factor);
}

TEST_CASE("sweep order permutations visit every point once") {
  auto p = testsup::example_fe_problem(2, 0.5);
  BlockOperator op = build_block(p, BlockVariant::A);
  PointBlockDiag d = invert_point_blocks(op);
  Vec rhs = testsup::block_rhs(p);

  // reversing the order changes the iteration but not the fixed point
  Vec exact = testsup::dense_block_solve(p, rhs);
  Vec xf = exact, xr = exact;
  collective_gs_sweep(op, d, xf, rhs, nullptr, false);
  collective_gs_sweep(op, d, xr, rhs, nullptr, true);
  for (std::size_t i = 0; i < exact.size(); ++i) {
    CHECK(std::abs(xf[i] - exact[i]) <= 1e-9 * (1.0 + std::abs(exact[i])));
    CHECK(std::abs(xr[i] - exact[i]) <= 1e-9 * (1.0 + std::abs(exact[i])));
  }

  // generic path equals the fused path for the coarse-first order too
  BlockOperator ref = op;
  ref.force_generic = true;
  Vec a = random_vector(2 * p.n(), 61), b = a;
  collective_gs_sweep(op, d, a, rhs, &p.sys->gs_order);
  collective_gs_sweep(ref, d, b, rhs, &p.sys->gs_order);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
}

TEST_CASE("scalar Gauss-Seidel converges on the scaled stiffness system") {
  auto p = testsup::example_fe_problem(2, 1.0);
  const SparseMatrix& b = p.sys->B;
  Vec rhs = random_vector(p.n(), 71);
  Vec x(p.n(), 0.0);
  for (int sweep = 0; sweep < 400; ++sweep) scalar_gs_sweep(b, -2.0, rhs, x);
  Vec bx = b.apply(x);
  for (int i = 0; i < p.n(); ++i) CHECK(-2.0 * bx[i] == doctest::Approx(rhs[i]).epsilon(1e-6));
}

TEST_CASE("distributive sweep") {
  SUBCASE("exact iterate is a fixed point") {
    auto p = testsup::example_fe_problem(2, 0.1);
    BlockOperator bt = build_block(p, BlockVariant::Btilde);
    DiagonalMatrix sd = schur_diagonal(p);
    Vec rhs = testsup::block_rhs(p);
    Vec x = DenseLU::factor(bt.densify()).solve(rhs);
    Vec before = x;
    DistributiveWork w;
    SmootherConfig cfg;
    distributive_sweep(p, BlockVariant::Btilde, bt, sd, x, rhs, cfg, w);
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(std::abs(x[i] - before[i]) <= 1e-9 * (1.0 + std::abs(before[i])));
  }
  SUBCASE("single dof with exact inner solves is a direct solver") {
    auto p = testsup::toy_problem(1.0, 2.0, 3.0, 1.0);
    BlockOperator bt = build_block(p, BlockVariant::Btilde);
    DiagonalMatrix sd = schur_diagonal(p);
    Vec rhs = {1.0, 2.0};
    Vec x = {0.0, 0.0};
    DistributiveWork w;
    SmootherConfig cfg;
    cfg.omega = 1.0; // 1x1 inner problems, one undamped sweep each is exact
    distributive_sweep(p, BlockVariant::Btilde, bt, sd, x, rhs, cfg, w);
    CHECK(residual_norm(bt, x, rhs) <= 1e-14);
  }
  SUBCASE("exact inner solves make one sweep a direct solver for the one-lumped target") {
    auto p = testsup::example_fe_problem(2, 0.05);
    const int n = p.n();
    BlockOperator bt = build_block(p, BlockVariant::Btilde);
    Vec rhs = random_vector(2 * n, 81);
    Vec x = random_vector(2 * n, 82);

    // the sweep algebra with both inner systems solved by dense LU
    Vec r(2 * n);
    bt.residual(rhs.data(), x.data(), r.data());
    Vec ru(r.begin() + n, r.end());
    DenseMatrix bd = DenseMatrix::from_sparse(p.sys->B);
    for (auto& v : bd.a) v *= -p.tau;
    Vec ey = DenseLU::factor(bd).solve(ru);
    Vec mey = p.sys->M.apply(ey);
    Vec rx(n);
    for (int i = 0; i < n; ++i) rx[i] = r[i] - mey[i];
    DenseMatrix schur(n, n);
    for (int i = 0; i < n; ++i) {
      Vec e(n, 0.0);
      e[i] = 1.0;
      Vec col = schur_apply(p, e);
      for (int j = 0; j < n; ++j) schur(j, i) = col[j];
    }
    Vec ex = DenseLU::factor(schur).solve(rx);
    Vec bex = p.sys->B.apply(ex);
    for (int i = 0; i < n; ++i) {
      x[i] += p.tau * bex[i] / p.sys->Mbar.d[i];
      x[n + i] += ex[i] + ey[i];
    }
    CHECK(residual_norm(bt, x, rhs) <= 1e-10 * kernels::nrm2(rhs.size(), rhs.data()));
  }
  SUBCASE("stationary iteration with default inner sweeps converges") {
    auto p = testsup::example_fe_problem(2, 1e-2);
    BlockOperator bt = build_block(p, BlockVariant::Btilde);
    DiagonalMatrix sd = schur_diagonal(p);
    Vec rhs = testsup::block_rhs(p);
    Vec x = random_vector(2 * p.n(), 83);
    DistributiveWork w;
    SmootherConfig cfg;
    const double r0 = residual_norm(bt, x, rhs);
    bool converged = false;
    for (int sweep = 0; sweep < 200 && !converged; ++sweep) {
      distributive_sweep(p, BlockVariant::Btilde, bt, sd, x, rhs, cfg, w);
      converged = residual_norm(bt, x, rhs) / r0 < 1e-7;
    }
    CHECK(converged);
    // and the limit is the dense solution of the target system
    Vec exact = DenseLU::factor(bt.densify()).solve(rhs);
    for (int sweep = 0; sweep < 200; ++sweep)
      distributive_sweep(p, BlockVariant::Btilde, bt, sd, x, rhs, cfg, w);
    CHECK(testsup::rel_diff(x, exact) <= 1e-6);
  }
  SUBCASE("tau = 0 is rejected") {
    auto p = testsup::example_fe_problem(2, 0.0);
    BlockOperator bt = build_block(p, BlockVariant::Btilde);
    DiagonalMatrix sd = schur_diagonal(p);
    Vec rhs = testsup::block_rhs(p);
    Vec x(2 * p.n(), 0.0);
    DistributiveWork w;
    SmootherConfig cfg;
    CHECK_THROWS_AS(distributive_sweep(p, BlockVariant::Btilde, bt, sd, x, rhs, cfg, w),
                    std::invalid_argument);
  }
  SUBCASE("only the lumped targets are accepted") {
    auto p = testsup::example_fe_problem(2, 0.1);
    BlockOperator op = build_block(p, BlockVariant::A);
    DiagonalMatrix sd = schur_diagonal(p);
    Vec rhs = testsup::block_rhs(p);
    Vec x(2 * p.n(), 0.0);
    DistributiveWork w;
    SmootherConfig cfg;
    CHECK_THROWS_AS(distributive_sweep(p, BlockVariant::A, op, sd, x, rhs, cfg, w),
                    std::invalid_argument);
  }
}

TEST_CASE("singular point blocks are reported") {
  auto p = testsup::toy_problem(0.0, 0.0, 0.0, 1.0);
  BlockOperator op = build_block(p, BlockVariant::A);
  CHECK_THROWS_AS(invert_point_blocks(op), std::runtime_error);
}
