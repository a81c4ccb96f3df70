#include "fourmg/sparse.hpp"

#include "fourmg/kernels.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fourmg {

double SparseMatrix::at(int i, int j) const {
  auto begin = col.begin() + row_ptr[i];
  auto end = col.begin() + row_ptr[i + 1];
  auto it = std::lower_bound(begin, end, j);
  if (it != end && *it == j) return val[it - col.begin()];
  return 0.0;
}

Vec SparseMatrix::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != cols)
    throw std::invalid_argument("spmv: dimension mismatch");
  Vec y(rows);
  kernels::spmv(*this, x.data(), y.data());
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t;
  t.rows = cols;
  t.cols = rows;
  t.row_ptr.assign(cols + 1, 0);
  for (int k = 0; k < nnz(); ++k) t.row_ptr[col[k] + 1]++;
  for (int i = 0; i < cols; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
  t.col.resize(nnz());
  t.val.resize(nnz());
  std::vector<int> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (int i = 0; i < rows; ++i) {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      int pos = next[col[k]]++;
      t.col[pos] = i;
      t.val[pos] = val[k];
    }
  }
  return t;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
  return rows == other.rows && cols == other.cols && row_ptr == other.row_ptr &&
         col == other.col;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix a;
  a.rows = a.cols = n;
  a.row_ptr.resize(n + 1);
  a.col.resize(n);
  a.val.assign(n, 1.0);
  std::iota(a.row_ptr.begin(), a.row_ptr.end(), 0);
  std::iota(a.col.begin(), a.col.end(), 0);
  return a;
}

SparseMatrix TripletBuilder::build() const {
  const std::size_t m = i.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (i[a] != i[b]) return i[a] < i[b];
    return j[a] < j[b];
  });

  SparseMatrix out;
  out.rows = rows;
  out.cols = cols;
  out.row_ptr.assign(rows + 1, 0);
  out.col.reserve(m);
  out.val.reserve(m);
  std::size_t k = 0;
  while (k < m) {
    int r = i[order[k]], c = j[order[k]];
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw std::out_of_range("TripletBuilder: index out of range");
    double s = 0.0;
    while (k < m && i[order[k]] == r && j[order[k]] == c) s += v[order[k++]];
    out.col.push_back(c);
    out.val.push_back(s);
    out.row_ptr[r + 1]++;
  }
  for (int r = 0; r < rows; ++r) out.row_ptr[r + 1] += out.row_ptr[r];
  return out;
}

Vec DiagonalMatrix::apply(const Vec& x) const {
  if (x.size() != d.size()) throw std::invalid_argument("diag apply: dimension mismatch");
  Vec y(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) y[k] = d[k] * x[k];
  return y;
}

void write_matrix_market(const SparseMatrix& A, const std::string& path, bool symmetric) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real "
      << (symmetric ? "symmetric" : "general") << "\n";
  int count = 0;
  for (int i = 0; i < A.rows; ++i)
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      if (!symmetric || A.col[k] <= i) count++;
  out << A.rows << ' ' << A.cols << ' ' << count << '\n';
  out.precision(17);
  for (int i = 0; i < A.rows; ++i)
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      if (!symmetric || A.col[k] <= i)
        out << i + 1 << ' ' << A.col[k] + 1 << ' ' << A.val[k] << '\n';
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("not a Matrix Market file: " + path);
  bool symmetric = line.find("symmetric") != std::string::npos;
  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::istringstream header(line);
  int rows, cols, count;
  if (!(header >> rows >> cols >> count))
    throw std::runtime_error("bad Matrix Market header: " + path);
  TripletBuilder b(rows, cols);
  for (int k = 0; k < count; ++k) {
    int i, j;
    double v;
    if (!(in >> i >> j >> v)) throw std::runtime_error("truncated Matrix Market file");
    b.add(i - 1, j - 1, v);
    if (symmetric && i != j) b.add(j - 1, i - 1, v);
  }
  return b.build();
}

} // namespace fourmg
