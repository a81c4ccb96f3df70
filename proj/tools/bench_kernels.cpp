// Timing comparison of the OpenMP kernels against the serial reference and
// of the fused collective sweep against the generic block path.

#include "fourmg/assembly.hpp"
#include "fourmg/block.hpp"
#include "fourmg/kernels.hpp"
#include "fourmg/rng.hpp"
#include "fourmg/smoothers.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    Timer t;
    fn();
    best = std::min(best, t.ms());
  }
  return best;
}

} // namespace

int main(int argc, char** argv) {
  int level = argc > 1 ? std::atoi(argv[1]) : 7;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 10;

  using namespace fourmg;
  ProblemSpec spec = example_problem(1);
  DiscreteProblem problem = build_problem(level, spec.bc, spec.a, spec.b, 1e-2);
  const DiscreteSystem& s = *problem.sys;
  const int n = s.n();
  std::printf("level %d: N_h = %d, nnz(A) = %d, threads = %d\n", level, n, s.A.nnz(),
              omp_get_max_threads());

  Vec x = random_vector(n, 1), y(n), y2(n);
  double t_par = time_best_of(reps, [&] { kernels::spmv(s.A, x.data(), y.data()); });
  double t_ser = time_best_of(reps, [&] { kernels::serial::spmv(s.A, x.data(), y2.data()); });
  std::printf("spmv            : omp %8.3f ms   serial %8.3f ms   speedup %.2fx\n", t_par, t_ser,
              t_ser / t_par);

  t_par = time_best_of(reps, [&] { kernels::axpy(n, 0.5, x.data(), y.data()); });
  t_ser = time_best_of(reps, [&] { kernels::serial::axpy(n, 0.5, x.data(), y2.data()); });
  std::printf("axpy            : omp %8.3f ms   serial %8.3f ms   speedup %.2fx\n", t_par, t_ser,
              t_ser / t_par);

  BlockOperator op = build_block(problem, BlockVariant::A);
  BlockOperator op_generic = op;
  op_generic.force_generic = true;
  Vec bx = random_vector(2 * n, 2), by(2 * n), by2(2 * n);
  t_par = time_best_of(reps, [&] { op.apply(bx.data(), by.data()); });
  t_ser = time_best_of(reps, [&] { op_generic.apply(bx.data(), by2.data()); });
  std::printf("block apply     : fused %6.3f ms   generic %6.3f ms  speedup %.2fx\n", t_par,
              t_ser, t_ser / t_par);

  PointBlockDiag pb = invert_point_blocks(op);
  Vec rhs = random_vector(2 * n, 3);
  Vec xs = bx, xs2 = bx;
  t_par = time_best_of(reps, [&] { collective_gs_sweep(op, pb, xs, rhs); });
  t_ser = time_best_of(reps, [&] { collective_gs_sweep(op_generic, pb, xs2, rhs); });
  std::printf("collective GS   : fused %6.3f ms   generic %6.3f ms  speedup %.2fx\n", t_par,
              t_ser, t_ser / t_par);

  Vec work(2 * n);
  xs = bx;
  xs2 = bx;
  t_par = time_best_of(reps, [&] { collective_jacobi_sweep(op, pb, xs, rhs, 0.8, work); });
  t_ser =
      time_best_of(reps, [&] { collective_jacobi_sweep(op_generic, pb, xs2, rhs, 0.8, work); });
  std::printf("collective CJ   : fused %6.3f ms   generic %6.3f ms  speedup %.2fx\n", t_par,
              t_ser, t_ser / t_par);
  return 0;
}
