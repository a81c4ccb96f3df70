#include "fourmg/smoothers.hpp"

#include "fourmg/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace fourmg {

PointBlockDiag invert_point_blocks(const BlockOperator& op) {
  PointBlockDiag d;
  d.inv.resize(4 * static_cast<std::size_t>(op.n));
  for (int i = 0; i < op.n; ++i) {
    const double a00 = op.tl.diag_entry(i);
    const double a01 = op.tr.diag_entry(i);
    const double a10 = op.bl.diag_entry(i);
    const double a11 = op.br.diag_entry(i);
    const double det = a00 * a11 - a01 * a10;
    const double scale = std::abs(a00) + std::abs(a01) + std::abs(a10) + std::abs(a11);
    if (std::abs(det) <= 1e-300 || std::abs(det) < 1e-14 * scale * scale)
      throw std::runtime_error("invert_point_blocks: singular 2x2 block at point " +
                               std::to_string(i));
    d.inv[4 * i + 0] = a11 / det;
    d.inv[4 * i + 1] = -a01 / det;
    d.inv[4 * i + 2] = -a10 / det;
    d.inv[4 * i + 3] = a00 / det;
  }
  return d;
}

namespace {

double row_dot(const BlockRef& blk, int i, const double* x) {
  switch (blk.kind) {
    case BlockKind::Zero:
      return 0.0;
    case BlockKind::Diag:
      return blk.scale * blk.diag->d[i] * x[i];
    case BlockKind::Csr: {
      const SparseMatrix& s = *blk.csr;
      double acc = 0.0;
      for (int k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k) acc += s.val[k] * x[s.col[k]];
      return blk.scale * acc;
    }
  }
  return 0.0;
}

void check_dims(const BlockOperator& op, const Vec& x, const Vec& rhs) {
  if (static_cast<int>(x.size()) != 2 * op.n || static_cast<int>(rhs.size()) != 2 * op.n)
    throw std::invalid_argument("smoother sweep: dimension mismatch");
}

} // namespace

void collective_jacobi_sweep(const BlockOperator& op, const PointBlockDiag& D, Vec& x,
                             const Vec& rhs, double theta, Vec& work) {
  check_dims(op, x, rhs);
  if (work.size() < x.size()) work.resize(x.size());
  op.residual(rhs.data(), x.data(), work.data());
  const int n = op.n;
  const double* r = work.data();
  const double* inv = D.inv.data();
  double* xv = x.data();
  double* xu = x.data() + n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double r1 = r[i], r2 = r[n + i];
    xv[i] += theta * (inv[4 * i + 0] * r1 + inv[4 * i + 1] * r2);
    xu[i] += theta * (inv[4 * i + 2] * r1 + inv[4 * i + 3] * r2);
  }
}

namespace {

template <bool TR_CSR, bool BL_CSR>
void fused_gs(const BlockOperator& op, const PointBlockDiag& D, Vec& x, const Vec& rhs,
              const int* perm, bool reverse) {
  const int n = op.n;
  double* xv = x.data();
  double* xu = x.data() + n;
  const double* fv = rhs.data();
  const double* fu = rhs.data() + n;
  const double* inv = D.inv.data();
  const SparseMatrix& S = *op.pattern;
  const int* rp = S.row_ptr.data();
  const int* cl = S.col.data();
  const double* a = op.tl.csr->val.data();
  const double* b = op.br.csr->val.data();
  const double sa = op.tl.scale, sb = op.br.scale;
  const double* m_tr = TR_CSR ? op.tr.csr->val.data() : nullptr;
  const double* m_bl = BL_CSR ? op.bl.csr->val.data() : nullptr;
  const double* d_tr = TR_CSR ? nullptr : op.tr.diag->d.data();
  const double* d_bl = BL_CSR ? nullptr : op.bl.diag->d.data();
  const double str = op.tr.scale, sbl = op.bl.scale;
  const int begin = reverse ? n - 1 : 0;
  const int end = reverse ? -1 : n;
  const int step = reverse ? -1 : 1;
  for (int t = begin; t != end; t += step) {
    const int i = perm ? perm[t] : t;
    double av = 0.0, bu = 0.0, tru = 0.0, blv = 0.0;
    for (int k = rp[i]; k < rp[i + 1]; ++k) {
      const int j = cl[k];
      av += a[k] * xv[j];
      bu += b[k] * xu[j];
      if constexpr (TR_CSR) tru += m_tr[k] * xu[j];
      if constexpr (BL_CSR) blv += m_bl[k] * xv[j];
    }
    if constexpr (!TR_CSR) tru = d_tr[i] * xu[i];
    if constexpr (!BL_CSR) blv = d_bl[i] * xv[i];
    const double r1 = fv[i] - sa * av - str * tru;
    const double r2 = fu[i] - sbl * blv - sb * bu;
    xv[i] += inv[4 * i + 0] * r1 + inv[4 * i + 1] * r2;
    xu[i] += inv[4 * i + 2] * r1 + inv[4 * i + 3] * r2;
  }
}

} // namespace

void collective_gs_sweep(const BlockOperator& op, const PointBlockDiag& D, Vec& x,
                         const Vec& rhs, const std::vector<int>* order, bool reverse) {
  check_dims(op, x, rhs);
  const int n = op.n;
  if (order && static_cast<int>(order->size()) != n)
    throw std::invalid_argument("collective_gs_sweep: order size mismatch");
  double* xv = x.data();
  double* xu = x.data() + n;
  const double* fv = rhs.data();
  const double* fu = rhs.data() + n;
  const double* inv = D.inv.data();
  const int* perm = order ? order->data() : nullptr;
  const int begin = reverse ? n - 1 : 0;
  const int end = reverse ? -1 : n;
  const int step = reverse ? -1 : 1;

  if (op.pattern && !op.force_generic) {
    const bool tr_csr = op.tr.kind == BlockKind::Csr;
    const bool bl_csr = op.bl.kind == BlockKind::Csr;
    if (tr_csr && bl_csr) {
      fused_gs<true, true>(op, D, x, rhs, perm, reverse);
    } else if (tr_csr && !bl_csr) {
      fused_gs<true, false>(op, D, x, rhs, perm, reverse);
    } else if (!tr_csr && bl_csr) {
      fused_gs<false, true>(op, D, x, rhs, perm, reverse);
    } else {
      fused_gs<false, false>(op, D, x, rhs, perm, reverse);
    }
    return;
  }

  for (int t = begin; t != end; t += step) {
    const int i = perm ? perm[t] : t;
    const double r1 = fv[i] - row_dot(op.tl, i, xv) - row_dot(op.tr, i, xu);
    const double r2 = fu[i] - row_dot(op.bl, i, xv) - row_dot(op.br, i, xu);
    xv[i] += inv[4 * i + 0] * r1 + inv[4 * i + 1] * r2;
    xu[i] += inv[4 * i + 2] * r1 + inv[4 * i + 3] * r2;
  }
}

void scalar_gs_sweep(const SparseMatrix& S, double scale, const double* rhs, double* x) {
  for (int i = 0; i < S.rows; ++i) {
    double acc = 0.0;
    double diag = 0.0;
    for (int k = S.row_ptr[i]; k < S.row_ptr[i + 1]; ++k) {
      const int j = S.col[k];
      acc += S.val[k] * x[j];
      if (j == i) diag = S.val[k];
    }
    x[i] += (rhs[i] - scale * acc) / (scale * diag);
  }
}

void scalar_gs_sweep(const SparseMatrix& S, double scale, const Vec& rhs, Vec& x) {
  if (static_cast<int>(x.size()) != S.rows || rhs.size() != x.size())
    throw std::invalid_argument("scalar_gs_sweep: dimension mismatch");
  scalar_gs_sweep(S, scale, rhs.data(), x.data());
}

void distributive_sweep(const DiscreteProblem& problem, BlockVariant target,
                        const BlockOperator& op, const DiagonalMatrix& schur_diag, Vec& x,
                        const Vec& rhs, const SmootherConfig& cfg, DistributiveWork& work) {
  if (target != BlockVariant::B && target != BlockVariant::Btilde)
    throw std::invalid_argument("distributive_sweep: target must be B or Btilde");
  if (problem.tau == 0.0)
    throw std::invalid_argument("distributive_sweep: tau = 0 makes the e_y equation singular");
  check_dims(op, x, rhs);
  const DiscreteSystem& s = *problem.sys;
  const int n = op.n;
  work.resize(n);

  op.residual(rhs.data(), x.data(), work.r.data());
  const double* rv = work.r.data();
  const double* ru = work.r.data() + n;

  // -tau B e_y = r_u, scalar Gauss-Seidel from zero.
  kernels::fill(n, 0.0, work.ey.data());
  for (int sweep = 0; sweep < cfg.gs_sweeps; ++sweep)
    scalar_gs_sweep(s.B, -problem.tau, ru, work.ey.data());

  // (M + tau^2 A Mbar^-1 B) e_x = r_v - M e_y (Mbar e_y for the all-lumped
  // target), damped Jacobi from zero.
  double* rhs_x = work.t0.data();
  if (target == BlockVariant::Btilde) {
    kernels::spmv(s.M, work.ey.data(), rhs_x);
    for (int i = 0; i < n; ++i) rhs_x[i] = rv[i] - rhs_x[i];
  } else {
    for (int i = 0; i < n; ++i) rhs_x[i] = rv[i] - s.Mbar.d[i] * work.ey[i];
  }
  const double* d = schur_diag.d.data();
  double* ex = work.ex.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) ex[i] = cfg.omega * rhs_x[i] / d[i];
  for (int sweep = 1; sweep < cfg.jacobi_sweeps; ++sweep) {
    schur_apply(problem, ex, work.t1.data(), work.r.data()); // r reused as scratch
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) ex[i] += cfg.omega * (rhs_x[i] - work.t1[i]) / d[i];
  }

  // e_v = tau Mbar^-1 B e_x; e_u = e_x + e_y.
  kernels::spmv(s.B, ex, work.t1.data());
  double* xv = x.data();
  double* xu = x.data() + n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    xv[i] += problem.tau * work.t1[i] / s.Mbar.d[i];
    xu[i] += ex[i] + work.ey[i];
  }
}

} // namespace fourmg
