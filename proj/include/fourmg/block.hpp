#pragma once

#include "fourmg/assembly.hpp"
#include "fourmg/dense.hpp"
#include "fourmg/sparse.hpp"

namespace fourmg {

/// Which 2x2 block matrix to form from a problem's pieces:
///   A      [[tau A, M   ], [M,    -tau B]]   the discrete operator
///   B      [[tau A, Mbar], [Mbar, -tau B]]   both mass blocks lumped
///   Btilde [[tau A, M   ], [Mbar, -tau B]]   one mass block lumped
///   Bd     [[M, 0], [0, M]]                  block diagonal, (u,v) ordering
enum class BlockVariant { A, B, Btilde, Bd };

enum class BlockKind { Zero, Csr, Diag };

/// One block: scale * Op where Op is a referenced sparse or diagonal matrix.
struct BlockRef {
  BlockKind kind = BlockKind::Zero;
  const SparseMatrix* csr = nullptr;
  const DiagonalMatrix* diag = nullptr;
  double scale = 1.0;

  double diag_entry(int i) const;
  void apply_acc(const double* x, double* y, int n) const; // y += scale Op x
};

/// 2N x 2N operator held as four blocks over the free DOFs; block rows act
/// on (v-part, u-part) of a stacked vector. Blocks reference the problem's
/// matrices, nothing is copied.
struct BlockOperator {
  int n = 0;
  BlockRef tl, tr, bl, br;
  bool symmetric = false;
  // All CSR blocks share the row_ptr/col arrays of `pattern` (matrices
  // assembled from one mesh do). Enables the single-pass apply and sweeps.
  const SparseMatrix* pattern = nullptr;
  bool force_generic = false; // test hook: always take the generic path

  void apply(const double* x, double* y) const;              // y = Op x
  void residual(const double* rhs, const double* x, double* r) const;
  Vec apply(const Vec& x) const;
  DenseMatrix densify() const;
};

BlockOperator build_block(const DiscreteProblem& problem, BlockVariant variant);

/// Diagonal of M + tau^2 A Mbar^-1 B in O(nnz) work, never forming the
/// product. Throws when an entry comes out nonpositive.
DiagonalMatrix schur_diagonal(const DiscreteProblem& problem);

/// y = M x + tau^2 A (Mbar^-1 (B x)) via three sparse products.
Vec schur_apply(const DiscreteProblem& problem, const Vec& x);
void schur_apply(const DiscreteProblem& problem, const double* x, double* y, double* scratch);

} // namespace fourmg
