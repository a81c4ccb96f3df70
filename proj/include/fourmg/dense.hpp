#pragma once

#include "fourmg/sparse.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace fourmg {

/// Row-major dense matrix for verification-scale work (n up to a few
/// thousand).
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a; // row-major

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  double trace() const;
  double norm_inf() const; // max row sum
  DenseMatrix transpose() const;
  Vec apply(const Vec& x) const;
  DenseMatrix multiply(const DenseMatrix& other) const;

  static DenseMatrix identity(int n);
  static DenseMatrix from_sparse(const SparseMatrix& s);
};

inline constexpr int kDenseEigCap = 4000;

/// All eigenvalues of a general real square matrix (balanced Hessenberg QR
/// via LAPACK dgeev). Throws on non-convergence and when n exceeds the cap.
std::vector<std::complex<double>> dense_eigenvalues(const DenseMatrix& A, int cap = kDenseEigCap);

struct EigenPairs {
  std::vector<std::complex<double>> values;
  std::vector<std::vector<std::complex<double>>> vectors; // vectors[k] belongs to values[k]
};
EigenPairs dense_eigenpairs(const DenseMatrix& A, int cap = kDenseEigCap);

/// Extreme eigenvalues of T^(-1/2) S T^(-1/2) for symmetric S and positive
/// diagonal T. Throws when S is asymmetric beyond 1e-12 or T has a
/// nonpositive entry.
std::pair<double, double> sym_generalized_eig_extremes(const DenseMatrix& S,
                                                       const DiagonalMatrix& T);

/// All eigenvalues of the symmetric pencil S x = lambda T x with T SPD.
Vec sym_pencil_eigenvalues(const DenseMatrix& S, const DenseMatrix& T);

/// All eigenvalues of a symmetric matrix.
Vec sym_eigenvalues(const DenseMatrix& S);

struct DenseLU {
  int n = 0;
  std::vector<double> lu; // row-major factors
  std::vector<int> ipiv;

  static DenseLU factor(const DenseMatrix& A);
  Vec solve(const Vec& b) const;
  void solve_inplace(double* b, int nrhs) const; // b is n x nrhs row-major
};

} // namespace fourmg
