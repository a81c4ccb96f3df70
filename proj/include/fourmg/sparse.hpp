#pragma once

#include <string>
#include <vector>

namespace fourmg {

using Vec = std::vector<double>;

/// Compressed-row sparse matrix. Column indices are strictly increasing
/// within each row and duplicates are summed at build time; entries whose
/// sum is exactly zero are kept so that matrices assembled from the same
/// mesh share one sparsity pattern.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr; // size rows+1
  std::vector<int> col;     // size nnz
  std::vector<double> val;  // size nnz

  int nnz() const { return static_cast<int>(col.size()); }
  double at(int i, int j) const; // 0 if the entry is absent
  Vec apply(const Vec& x) const; // spmv
  SparseMatrix transpose() const;
  bool same_pattern(const SparseMatrix& other) const;

  static SparseMatrix identity(int n);
};

struct TripletBuilder {
  int rows = 0;
  int cols = 0;
  std::vector<int> i, j;
  std::vector<double> v;

  TripletBuilder(int r, int c) : rows(r), cols(c) {}
  void add(int row, int colidx, double value) {
    i.push_back(row);
    j.push_back(colidx);
    v.push_back(value);
  }
  SparseMatrix build() const;
};

struct DiagonalMatrix {
  Vec d;

  int n() const { return static_cast<int>(d.size()); }
  Vec apply(const Vec& x) const;
};

// Matrix Market coordinate format (real general / real symmetric).
void write_matrix_market(const SparseMatrix& A, const std::string& path, bool symmetric = false);
SparseMatrix read_matrix_market(const std::string& path);

} // namespace fourmg
