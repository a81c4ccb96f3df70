#include "fourmg/block.hpp"

#include "fourmg/kernels.hpp"

#include <stdexcept>

namespace fourmg {

double BlockRef::diag_entry(int i) const {
  switch (kind) {
    case BlockKind::Zero:
      return 0.0;
    case BlockKind::Diag:
      return scale * diag->d[i];
    case BlockKind::Csr:
      return scale * csr->at(i, i);
  }
  return 0.0;
}

void BlockRef::apply_acc(const double* x, double* y, int n) const {
  switch (kind) {
    case BlockKind::Zero:
      return;
    case BlockKind::Diag:
      kernels::diag_acc(*diag, scale, x, y);
      return;
    case BlockKind::Csr:
      if (csr->rows != n) throw std::invalid_argument("block apply: dimension mismatch");
      kernels::spmv_acc(*csr, scale, x, y);
      return;
  }
}

namespace {

bool csr_blocks_share(const BlockOperator& op) {
  const SparseMatrix* ref = nullptr;
  for (const BlockRef* b : {&op.tl, &op.tr, &op.bl, &op.br}) {
    if (b->kind != BlockKind::Csr) continue;
    if (!ref) {
      ref = b->csr;
    } else if (!ref->same_pattern(*b->csr)) {
      return false;
    }
  }
  return ref != nullptr;
}

// One pass over the shared pattern per block row; the off-diagonal blocks
// are either CSR on the same pattern or diagonal, fixed at compile time so
// the lumped variants do not pay for mass-value streams they never read.
template <bool TR_CSR, bool BL_CSR, bool RESIDUAL>
void fused_pass(const BlockOperator& op, const double* rhs, const double* x, double* out) {
  const int n = op.n;
  const double* xv = x;
  const double* xu = x + n;
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

#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
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
    if constexpr (RESIDUAL) {
      out[i] = rhs[i] - sa * av - str * tru;
      out[n + i] = rhs[n + i] - sbl * blv - sb * bu;
    } else {
      out[i] = sa * av + str * tru;
      out[n + i] = sbl * blv + sb * bu;
    }
  }
}

template <bool RESIDUAL>
void fused_dispatch(const BlockOperator& op, const double* rhs, const double* x, double* out) {
  const bool tr_csr = op.tr.kind == BlockKind::Csr;
  const bool bl_csr = op.bl.kind == BlockKind::Csr;
  if (tr_csr && bl_csr) {
    fused_pass<true, true, RESIDUAL>(op, rhs, x, out);
  } else if (tr_csr && !bl_csr) {
    fused_pass<true, false, RESIDUAL>(op, rhs, x, out);
  } else if (!tr_csr && bl_csr) {
    fused_pass<false, true, RESIDUAL>(op, rhs, x, out);
  } else {
    fused_pass<false, false, RESIDUAL>(op, rhs, x, out);
  }
}

} // namespace

void BlockOperator::apply(const double* x, double* y) const {
  if (pattern && !force_generic) {
    fused_dispatch<false>(*this, nullptr, x, y);
    return;
  }
  kernels::fill(2 * static_cast<std::size_t>(n), 0.0, y);
  tl.apply_acc(x, y, n);
  tr.apply_acc(x + n, y, n);
  bl.apply_acc(x, y + n, n);
  br.apply_acc(x + n, y + n, n);
}

void BlockOperator::residual(const double* rhs, const double* x, double* r) const {
  if (pattern && !force_generic) {
    fused_dispatch<true>(*this, rhs, x, r);
    return;
  }
  Vec ax(2 * static_cast<std::size_t>(n));
  apply(x, ax.data());
  for (int i = 0; i < 2 * n; ++i) r[i] = rhs[i] - ax[i];
}

Vec BlockOperator::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != 2 * n)
    throw std::invalid_argument("block apply: dimension mismatch");
  Vec y(2 * static_cast<std::size_t>(n));
  apply(x.data(), y.data());
  return y;
}

DenseMatrix BlockOperator::densify() const {
  DenseMatrix d(2 * n, 2 * n);
  auto put = [&](const BlockRef& blk, int roff, int coff) {
    if (blk.kind == BlockKind::Csr) {
      const SparseMatrix& s = *blk.csr;
      for (int i = 0; i < s.rows; ++i)
        for (int k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k)
          d(roff + i, coff + s.col[k]) += blk.scale * s.val[k];
    } else if (blk.kind == BlockKind::Diag) {
      for (int i = 0; i < blk.diag->n(); ++i) d(roff + i, coff + i) += blk.scale * blk.diag->d[i];
    }
  };
  put(tl, 0, 0);
  put(tr, 0, n);
  put(bl, n, 0);
  put(br, n, n);
  return d;
}

BlockOperator build_block(const DiscreteProblem& problem, BlockVariant variant) {
  const DiscreteSystem& s = *problem.sys;
  const double tau = problem.tau;
  BlockOperator op;
  op.n = s.n();
  switch (variant) {
    case BlockVariant::A:
      op.tl = {BlockKind::Csr, &s.A, nullptr, tau};
      op.tr = {BlockKind::Csr, &s.M, nullptr, 1.0};
      op.bl = {BlockKind::Csr, &s.M, nullptr, 1.0};
      op.br = {BlockKind::Csr, &s.B, nullptr, -tau};
      op.symmetric = true;
      break;
    case BlockVariant::B:
      op.tl = {BlockKind::Csr, &s.A, nullptr, tau};
      op.tr = {BlockKind::Diag, nullptr, &s.Mbar, 1.0};
      op.bl = {BlockKind::Diag, nullptr, &s.Mbar, 1.0};
      op.br = {BlockKind::Csr, &s.B, nullptr, -tau};
      op.symmetric = true;
      break;
    case BlockVariant::Btilde:
      op.tl = {BlockKind::Csr, &s.A, nullptr, tau};
      op.tr = {BlockKind::Csr, &s.M, nullptr, 1.0};
      op.bl = {BlockKind::Diag, nullptr, &s.Mbar, 1.0};
      op.br = {BlockKind::Csr, &s.B, nullptr, -tau};
      op.symmetric = false;
      break;
    case BlockVariant::Bd:
      op.tl = {BlockKind::Csr, &s.M, nullptr, 1.0};
      op.tr = {BlockKind::Zero, nullptr, nullptr, 0.0};
      op.bl = {BlockKind::Zero, nullptr, nullptr, 0.0};
      op.br = {BlockKind::Csr, &s.M, nullptr, 1.0};
      op.symmetric = true;
      break;
  }
  if (variant != BlockVariant::Bd && csr_blocks_share(op)) op.pattern = op.tl.csr;
  return op;
}

DiagonalMatrix schur_diagonal(const DiscreteProblem& problem) {
  const DiscreteSystem& s = *problem.sys;
  const double t2 = problem.tau * problem.tau;
  const int n = s.n();
  DiagonalMatrix d;
  d.d.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = s.M.at(i, i);
    // d_i = M_ii + tau^2 sum_k A_ik B_ki / Mbar_kk; B symmetric, so walk
    // rows i of A and B together (sorted columns).
    int ka = s.A.row_ptr[i], kb = s.B.row_ptr[i];
    const int ea = s.A.row_ptr[i + 1], eb = s.B.row_ptr[i + 1];
    while (ka < ea && kb < eb) {
      const int ca = s.A.col[ka], cb = s.B.col[kb];
      if (ca == cb) {
        acc += t2 * s.A.val[ka] * s.B.val[kb] / s.Mbar.d[ca];
        ++ka;
        ++kb;
      } else if (ca < cb) {
        ++ka;
      } else {
        ++kb;
      }
    }
    if (!(acc > 0.0))
      throw std::runtime_error("schur_diagonal: nonpositive entry at row " + std::to_string(i));
    d.d[i] = acc;
  }
  return d;
}

void schur_apply(const DiscreteProblem& problem, const double* x, double* y, double* scratch) {
  const DiscreteSystem& s = *problem.sys;
  const int n = s.n();
  kernels::spmv(s.B, x, scratch);
  for (int i = 0; i < n; ++i) scratch[i] /= s.Mbar.d[i];
  kernels::spmv(s.A, scratch, y);
  const double t2 = problem.tau * problem.tau;
  for (int i = 0; i < n; ++i) y[i] *= t2;
  kernels::spmv_acc(s.M, 1.0, x, y);
}

Vec schur_apply(const DiscreteProblem& problem, const Vec& x) {
  if (static_cast<int>(x.size()) != problem.n())
    throw std::invalid_argument("schur_apply: dimension mismatch");
  Vec y(x.size()), scratch(x.size());
  schur_apply(problem, x.data(), y.data(), scratch.data());
  return y;
}

} // namespace fourmg
