#include "fourmg/kernels.hpp"

#include <cmath>

namespace fourmg::kernels {

void spmv(const SparseMatrix& A, const double* x, double* y) {
  const int* rp = A.row_ptr.data();
  const int* cl = A.col.data();
  const double* vl = A.val.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int k = rp[i]; k < rp[i + 1]; ++k) s += vl[k] * x[cl[k]];
    y[i] = s;
  }
}

void spmv_acc(const SparseMatrix& A, double alpha, const double* x, double* y) {
  const int* rp = A.row_ptr.data();
  const int* cl = A.col.data();
  const double* vl = A.val.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int k = rp[i]; k < rp[i + 1]; ++k) s += vl[k] * x[cl[k]];
    y[i] += alpha * s;
  }
}

void diag_acc(const DiagonalMatrix& D, double alpha, const double* x, double* y) {
  const double* d = D.d.data();
  const int n = D.n();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] += alpha * d[i] * x[i];
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) y[i] += alpha * x[i];
}

void scal(std::size_t n, double alpha, double* x) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) x[i] *= alpha;
}

void copy(std::size_t n, const double* x, double* y) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) y[i] = x[i];
}

void fill(std::size_t n, double value, double* x) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) x[i] = value;
}

double dot(std::size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2(std::size_t n, const double* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

namespace serial {

void spmv(const SparseMatrix& A, const double* x, double* y) {
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) s += A.val[k] * x[A.col[k]];
    y[i] = s;
  }
}

void spmv_acc(const SparseMatrix& A, double alpha, const double* x, double* y) {
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) s += A.val[k] * x[A.col[k]];
    y[i] += alpha * s;
  }
}

void diag_acc(const DiagonalMatrix& D, double alpha, const double* x, double* y) {
  for (int i = 0; i < D.n(); ++i) y[i] += alpha * D.d[i] * x[i];
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

} // namespace serial

} // namespace fourmg::kernels
