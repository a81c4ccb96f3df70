#pragma once

#include "fourmg/sparse.hpp"

#include <cstddef>

namespace fourmg::kernels {

// OpenMP-parallel kernels. Each output entry is produced by exactly one
// thread with a fixed in-row summation order (ascending column), so results
// are identical to the serial reference bit for bit.

void spmv(const SparseMatrix& A, const double* x, double* y);             // y = A x
void spmv_acc(const SparseMatrix& A, double alpha, const double* x, double* y); // y += alpha A x
void diag_acc(const DiagonalMatrix& D, double alpha, const double* x, double* y);
void axpy(std::size_t n, double alpha, const double* x, double* y); // y += alpha x
void scal(std::size_t n, double alpha, double* x);
void copy(std::size_t n, const double* x, double* y);
void fill(std::size_t n, double value, double* x);

// Reductions stay serial: a fixed summation order keeps runs reproducible
// regardless of thread count.
double dot(std::size_t n, const double* x, const double* y);
double nrm2(std::size_t n, const double* x);

namespace serial {
// Reference implementations used by the test suite and the kernel
// benchmark.
void spmv(const SparseMatrix& A, const double* x, double* y);
void spmv_acc(const SparseMatrix& A, double alpha, const double* x, double* y);
void diag_acc(const DiagonalMatrix& D, double alpha, const double* x, double* y);
void axpy(std::size_t n, double alpha, const double* x, double* y);
} // namespace serial

} // namespace fourmg::kernels
