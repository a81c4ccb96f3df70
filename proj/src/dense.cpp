#include "fourmg/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <lapacke.h>

namespace fourmg {

double DenseMatrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < std::min(rows, cols); ++i) s += (*this)(i, i);
  return s;
}

double DenseMatrix::norm_inf() const {
  double m = 0.0;
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols; ++j) s += std::abs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec DenseMatrix::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != cols)
    throw std::invalid_argument("DenseMatrix::apply: dimension mismatch");
  Vec y(rows, 0.0);
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const {
  if (cols != other.rows) throw std::invalid_argument("DenseMatrix::multiply: dimension mismatch");
  DenseMatrix out(rows, other.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < other.cols; ++j) out(i, j) += aik * other(k, j);
    }
  return out;
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& s) {
  DenseMatrix d(s.rows, s.cols);
  for (int i = 0; i < s.rows; ++i)
    for (int k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k) d(i, s.col[k]) = s.val[k];
  return d;
}

std::vector<std::complex<double>> dense_eigenvalues(const DenseMatrix& A, int cap) {
  if (A.rows != A.cols) throw std::invalid_argument("dense_eigenvalues: matrix not square");
  if (A.rows > cap) throw std::invalid_argument("dense_eigenvalues: dimension over cap");
  const int n = A.rows;
  std::vector<double> work = A.a;
  std::vector<double> wr(n), wi(n);
  int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, work.data(), n, wr.data(),
                           wi.data(), nullptr, n, nullptr, n);
  if (info < 0) throw std::invalid_argument("dense_eigenvalues: bad argument to dgeev");
  if (info > 0) throw std::runtime_error("dense_eigenvalues: QR iteration failed to converge");
  std::vector<std::complex<double>> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = {wr[i], wi[i]};
  return ev;
}

EigenPairs dense_eigenpairs(const DenseMatrix& A, int cap) {
  if (A.rows != A.cols) throw std::invalid_argument("dense_eigenpairs: matrix not square");
  if (A.rows > cap) throw std::invalid_argument("dense_eigenpairs: dimension over cap");
  const int n = A.rows;
  std::vector<double> work = A.a;
  std::vector<double> wr(n), wi(n), vr(static_cast<std::size_t>(n) * n);
  int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'V', n, work.data(), n, wr.data(),
                           wi.data(), nullptr, n, vr.data(), n);
  if (info < 0) throw std::invalid_argument("dense_eigenpairs: bad argument to dgeev");
  if (info > 0) throw std::runtime_error("dense_eigenpairs: QR iteration failed to converge");
  EigenPairs out;
  out.values.resize(n);
  out.vectors.assign(n, std::vector<std::complex<double>>(n));
  for (int j = 0; j < n; ++j) {
    out.values[j] = {wr[j], wi[j]};
    if (wi[j] > 0.0) {
      // columns j, j+1 hold real and imaginary parts of a conjugate pair
      for (int i = 0; i < n; ++i) {
        out.vectors[j][i] = {vr[static_cast<std::size_t>(i) * n + j],
                             vr[static_cast<std::size_t>(i) * n + j + 1]};
        out.vectors[j + 1][i] = std::conj(out.vectors[j][i]);
      }
    } else if (wi[j] == 0.0) {
      for (int i = 0; i < n; ++i) out.vectors[j][i] = vr[static_cast<std::size_t>(i) * n + j];
    }
  }
  return out;
}

std::pair<double, double> sym_generalized_eig_extremes(const DenseMatrix& S,
                                                       const DiagonalMatrix& T) {
  if (S.rows != S.cols || S.rows != T.n())
    throw std::invalid_argument("sym_generalized_eig_extremes: dimension mismatch");
  const int n = S.rows;
  double scale = std::max(S.norm_inf(), 1e-300);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(S(i, j) - S(j, i)) > 1e-12 * scale)
        throw std::invalid_argument("sym_generalized_eig_extremes: S is not symmetric");
  std::vector<double> tsqrt(n);
  for (int i = 0; i < n; ++i) {
    if (!(T.d[i] > 0.0))
      throw std::invalid_argument("sym_generalized_eig_extremes: nonpositive diagonal in T");
    tsqrt[i] = 1.0 / std::sqrt(T.d[i]);
  }
  DenseMatrix C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) C(i, j) = tsqrt[i] * S(i, j) * tsqrt[j];
  Vec w = sym_eigenvalues(C);
  return {w.front(), w.back()};
}

Vec sym_eigenvalues(const DenseMatrix& S) {
  if (S.rows != S.cols) throw std::invalid_argument("sym_eigenvalues: matrix not square");
  const int n = S.rows;
  std::vector<double> work = S.a;
  Vec w(n);
  int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  if (info != 0) throw std::runtime_error("sym_eigenvalues: dsyev failed");
  return w;
}

Vec sym_pencil_eigenvalues(const DenseMatrix& S, const DenseMatrix& T) {
  if (S.rows != S.cols || T.rows != T.cols || S.rows != T.rows)
    throw std::invalid_argument("sym_pencil_eigenvalues: dimension mismatch");
  const int n = S.rows;
  std::vector<double> a = S.a;
  std::vector<double> b = T.a;
  Vec w(n);
  int info = LAPACKE_dsygv(LAPACK_ROW_MAJOR, 1, 'N', 'L', n, a.data(), n, b.data(), n, w.data());
  if (info != 0) throw std::runtime_error("sym_pencil_eigenvalues: dsygv failed (T not SPD?)");
  return w;
}

DenseLU DenseLU::factor(const DenseMatrix& A) {
  if (A.rows != A.cols) throw std::invalid_argument("DenseLU: matrix not square");
  DenseLU f;
  f.n = A.rows;
  f.lu = A.a;
  f.ipiv.resize(A.rows);
  int info = LAPACKE_dgetrf(LAPACK_ROW_MAJOR, f.n, f.n, f.lu.data(), f.n, f.ipiv.data());
  if (info != 0) throw std::runtime_error("DenseLU: factorization failed (singular matrix?)");
  return f;
}

Vec DenseLU::solve(const Vec& b) const {
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("DenseLU::solve: dimension mismatch");
  Vec x = b;
  solve_inplace(x.data(), 1);
  return x;
}

void DenseLU::solve_inplace(double* b, int nrhs) const {
  int info = LAPACKE_dgetrs(LAPACK_ROW_MAJOR, 'N', n, nrhs, lu.data(), n,
                            const_cast<int*>(ipiv.data()), b, nrhs);
  if (info != 0) throw std::runtime_error("DenseLU::solve failed");
}

} // namespace fourmg
