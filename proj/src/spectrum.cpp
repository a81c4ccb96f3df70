#include "fourmg/spectrum.hpp"

#include "fourmg/kernels.hpp"
#include "fourmg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace fourmg {

bool SpectrumReport::all_satisfied() const {
  for (const auto& c : checks)
    if (!c.satisfied) return false;
  return true;
}

double estimate_C1(const SparseMatrix& M, const DiagonalMatrix& Mbar) {
  if (M.rows != Mbar.n()) throw std::invalid_argument("estimate_C1: dimension mismatch");
  if (M.rows == 0) return 1.0;
  auto [lo, hi] = sym_generalized_eig_extremes(DenseMatrix::from_sparse(M), Mbar);
  (void)hi;
  return lo;
}

namespace {

bool matrices_equal(const SparseMatrix& a, const SparseMatrix& b) {
  if (!a.same_pattern(b)) return false;
  for (int k = 0; k < a.nnz(); ++k)
    if (a.val[k] != b.val[k]) return false;
  return true;
}

// columns [0,n) <-> [n,2n): the (u,v) reordering of the block system
DenseMatrix swap_column_blocks(const DenseMatrix& m, int n) {
  DenseMatrix out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = m(i, j < n ? j + n : j - n);
  return out;
}

void append_check(SpectrumReport& rep, const std::string& name, bool ok, double margin) {
  rep.checks.push_back({name, ok, margin});
}

} // namespace

SpectrumReport preconditioned_spectrum(const DiscreteProblem& problem, BlockVariant precond,
                                       int cap) {
  const DiscreteSystem& s = *problem.sys;
  const int n = s.n();
  if (2 * n > cap) throw std::invalid_argument("preconditioned_spectrum: dimension over cap");

  DenseMatrix a_dense = build_block(problem, BlockVariant::A).densify();
  if (precond == BlockVariant::Bd) a_dense = swap_column_blocks(a_dense, n);
  const DenseMatrix p_dense = build_block(problem, precond).densify();
  DenseLU lu = DenseLU::factor(p_dense);
  lu.solve_inplace(a_dense.a.data(), 2 * n); // now holds P^-1 A

  SpectrumReport rep;
  rep.eigenvalues = dense_eigenvalues(a_dense, cap);
  rep.C1 = estimate_C1(s.M, s.Mbar);
  rep.rho = 0.0;
  for (const auto& ev : rep.eigenvalues) rep.rho = std::max(rep.rho, std::abs(ev));

  const double eps = 1e-9;
  switch (precond) {
    case BlockVariant::A: {
      double dev = 0.0;
      for (const auto& ev : rep.eigenvalues) dev = std::max(dev, std::abs(ev - 1.0));
      append_check(rep, "exact_preconditioner_identity", dev <= 1e-10, 1e-10 - dev);
      break;
    }
    case BlockVariant::B: {
      append_check(rep, "spectral_radius_lt_2", rep.rho < 2.0, 2.0 - rep.rho);
      break;
    }
    case BlockVariant::Btilde: {
      if (!matrices_equal(s.A, s.B)) break; // interval containment needs A = B
      double min_re = 1e300, max_re = -1e300, max_im = 0.0;
      int mult_one = 0;
      for (const auto& ev : rep.eigenvalues) {
        min_re = std::min(min_re, ev.real());
        max_re = std::max(max_re, ev.real());
        max_im = std::max(max_im, std::abs(ev.imag()));
        if (std::abs(ev - 1.0) <= 1e-7) mult_one++;
      }
      const double margin =
          std::min({min_re - (rep.C1 - eps), (1.0 + eps) - max_re, eps - max_im});
      append_check(rep, "spectrum_in_C1_1", margin >= 0.0, margin);
      append_check(rep, "eigenvalue_one_multiplicity_ge_Nh", mult_one >= n,
                   static_cast<double>(mult_one - n));
      break;
    }
    case BlockVariant::Bd:
      break; // covered by verify_bd_bound
  }
  return rep;
}

SpectrumReport spectrum_of_X(const DiscreteProblem& problem, int cap) {
  const DiscreteSystem& s = *problem.sys;
  const int n = s.n();
  if (n > cap) throw std::invalid_argument("spectrum_of_X: dimension over cap");
  if (!matrices_equal(s.A, s.B))
    throw std::invalid_argument("spectrum_of_X: requires identical stiffness matrices (a = b)");

  const DenseMatrix m_dense = DenseMatrix::from_sparse(s.M);
  const DenseMatrix a_dense = DenseMatrix::from_sparse(s.A);

  // X w = lambda w  <=>  (M - Mbar) w = lambda (Mbar + tau^2 A M^-1 A) w
  DenseMatrix z = a_dense; // M z = A
  DenseLU lu = DenseLU::factor(m_dense);
  lu.solve_inplace(z.a.data(), n);
  DenseMatrix t = a_dense.multiply(z);
  const double t2 = problem.tau * problem.tau;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double sym = 0.5 * (t(i, j) + t(j, i)) * t2;
      t(i, j) = sym;
      t(j, i) = sym;
    }
  for (int i = 0; i < n; ++i) t(i, i) += s.Mbar.d[i];

  DenseMatrix sm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sm(i, j) = m_dense(i, j);
  for (int i = 0; i < n; ++i) sm(i, i) -= s.Mbar.d[i];

  const Vec w = sym_pencil_eigenvalues(sm, t);

  SpectrumReport rep;
  rep.eigenvalues.reserve(n);
  for (double ev : w) rep.eigenvalues.emplace_back(ev, 0.0);
  rep.C1 = estimate_C1(s.M, s.Mbar);
  rep.rho = std::max(std::abs(w.front()), std::abs(w.back()));
  const double eps = 1e-9;
  const double margin = std::min(w.front() - (rep.C1 - 1.0), eps - w.back());
  append_check(rep, "sigma_X_in_C1m1_0", margin >= 0.0, margin);
  return rep;
}

SpectrumReport verify_bd_bound(const DiscreteProblem& problem, int cap) {
  const DiscreteSystem& s = *problem.sys;
  const int n = s.n();
  if (2 * n > cap) throw std::invalid_argument("verify_bd_bound: dimension over cap");

  DenseMatrix ma = DenseMatrix::from_sparse(s.A); // -> M^-1 A
  DenseMatrix mb = DenseMatrix::from_sparse(s.B); // -> M^-1 B
  DenseLU lu = DenseLU::factor(DenseMatrix::from_sparse(s.M));
  lu.solve_inplace(ma.a.data(), n);
  lu.solve_inplace(mb.a.data(), n);

  DenseMatrix e(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      e(i, n + j) = problem.tau * ma(i, j);
      e(n + i, j) = -problem.tau * mb(i, j);
    }

  SpectrumReport rep;
  const auto ev_e = dense_eigenvalues(e, cap);
  rep.rho = 0.0;
  for (const auto& ev : ev_e) rep.rho = std::max(rep.rho, std::abs(ev));
  rep.C1 = estimate_C1(s.M, s.Mbar);

  for (int i = 0; i < 2 * n; ++i) e(i, i) += 1.0;
  rep.eigenvalues = dense_eigenvalues(e, cap); // spectrum of I + E_d
  double max_dist = 0.0;
  for (const auto& ev : rep.eigenvalues) max_dist = std::max(max_dist, std::abs(ev - 1.0));

  append_check(rep, "rho_Ed_lt_1", rep.rho < 1.0, 1.0 - rep.rho);
  append_check(rep, "preconditioned_spectrum_in_disk", max_dist <= rep.rho + 1e-12,
               rep.rho + 1e-12 - max_dist);
  return rep;
}

bool smw_identity_holds(int n, int k, std::uint64_t seed, double tol, double* max_dev) {
  if (n <= 0 || k <= 0 || k > n || n > 50)
    throw std::invalid_argument("smw_identity_holds: need 0 < k <= n <= 50");
  for (int attempt = 0; attempt < 5; ++attempt) {
    std::mt19937_64 gen(seed + 1000003ULL * attempt);
    auto entry = [&] { return 2.0 * uniform01(gen) - 1.0; };
    DenseMatrix a(n, n), u(n, k), v(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = entry() + (i == j ? n : 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) {
        u(i, j) = entry();
        v(i, j) = entry();
      }
    try {
      DenseMatrix w = a;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < k; ++l) s += u(i, l) * v(j, l);
          w(i, j) += s;
        }
      DenseMatrix x = u; // (A + U V^T) x = U
      DenseLU::factor(w).solve_inplace(x.a.data(), k);
      DenseMatrix lhs = v.transpose().multiply(x);

      DenseMatrix y = u; // A y = U
      DenseLU::factor(a).solve_inplace(y.a.data(), k);
      DenseMatrix g = v.transpose().multiply(y);
      DenseMatrix ginv = DenseMatrix::identity(k);
      DenseLU::factor(g).solve_inplace(ginv.a.data(), k);
      for (int i = 0; i < k; ++i) ginv(i, i) += 1.0;
      DenseMatrix rhs = DenseMatrix::identity(k);
      DenseLU::factor(ginv).solve_inplace(rhs.a.data(), k);

      double dev = 0.0, scale = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          dev = std::max(dev, std::abs(lhs(i, j) - rhs(i, j)));
          scale = std::max(scale, std::abs(rhs(i, j)));
        }
      const double rel = dev / std::max(scale, 1e-300);
      if (max_dev) *max_dev = rel;
      return rel <= tol;
    } catch (const std::runtime_error&) {
      continue; // singular sample, regenerate
    }
  }
  throw std::runtime_error("smw_identity_holds: could not draw a nonsingular sample");
}

namespace {

struct ComplexVec {
  Vec re, im;
};

// Im(u^H S v) and Re(v^H S v) style forms for a real sparse S.
double im_form(const SparseMatrix& S, const ComplexVec& v, const ComplexVec& u) {
  Vec svr = S.apply(v.re), svi = S.apply(v.im);
  const std::size_t n = v.re.size();
  return kernels::dot(n, u.re.data(), svi.data()) - kernels::dot(n, u.im.data(), svr.data());
}

double im_form_diag(const DiagonalMatrix& D, const ComplexVec& v, const ComplexVec& u) {
  double s = 0.0;
  for (int i = 0; i < D.n(); ++i)
    s += D.d[i] * (u.re[i] * v.im[i] - u.im[i] * v.re[i]);
  return s;
}

double re_quadratic(const SparseMatrix& S, const ComplexVec& v) {
  Vec svr = S.apply(v.re), svi = S.apply(v.im);
  const std::size_t n = v.re.size();
  return kernels::dot(n, v.re.data(), svr.data()) + kernels::dot(n, v.im.data(), svi.data());
}

} // namespace

BoundCheck lambda_deviation_identity(const DiscreteProblem& problem, double rel_tol, int cap) {
  const DiscreteSystem& s = *problem.sys;
  const int n = s.n();
  if (2 * n > cap) throw std::invalid_argument("lambda_deviation_identity: dimension over cap");

  DenseMatrix pa = build_block(problem, BlockVariant::A).densify();
  DenseLU lu = DenseLU::factor(build_block(problem, BlockVariant::B).densify());
  lu.solve_inplace(pa.a.data(), 2 * n); // B^-1 A
  const EigenPairs pairs = dense_eigenpairs(pa, cap);

  const double mat_norm = pa.norm_inf();
  double worst = 0.0;
  int tested = 0;
  for (std::size_t p = 0; p < pairs.values.size(); ++p) {
    const auto lambda = pairs.values[p];
    const auto& w = pairs.vectors[p];
    if (w.empty()) continue;
    // keep only numerically clean eigenpairs
    double res = 0.0, wnorm = 0.0;
    std::vector<std::complex<double>> pw(2 * n, 0.0);
    for (int i = 0; i < 2 * n; ++i) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < 2 * n; ++j) acc += pa(i, j) * w[j];
      pw[i] = acc;
      wnorm += std::norm(w[i]);
    }
    wnorm = std::sqrt(wnorm);
    for (int i = 0; i < 2 * n; ++i) res += std::norm(pw[i] - lambda * w[i]);
    res = std::sqrt(res);
    if (res > 1e-8 * mat_norm * wnorm) continue;

    ComplexVec v{Vec(n), Vec(n)}, u{Vec(n), Vec(n)};
    for (int i = 0; i < n; ++i) {
      v.re[i] = w[i].real();
      v.im[i] = w[i].imag();
      u.re[i] = w[n + i].real();
      u.im[i] = w[n + i].imag();
    }
    const double alpha = problem.tau * (re_quadratic(s.A, v) + re_quadratic(s.B, u));
    const double im_m = im_form(s.M, v, u);
    const double im_mbar = im_form_diag(s.Mbar, v, u);
    const double im_delta = im_m - im_mbar;
    const double rhs = 4.0 * im_delta * im_delta / (alpha * alpha + 4.0 * im_mbar * im_mbar);
    const double lhs = std::norm(lambda - 1.0);
    const double dev = std::abs(lhs - rhs) / std::max({lhs, rhs, 1e-12});
    worst = std::max(worst, dev);
    tested++;
  }
  BoundCheck check;
  check.name = "lambda_deviation_identity";
  check.satisfied = tested > 0 && worst <= rel_tol;
  check.margin = rel_tol - worst;
  return check;
}

void write_spectrum_csv_header(std::ostream& out) { out << "re,im,h,tau,precond\n"; }

void write_spectrum_csv(std::ostream& out, const SpectrumReport& report, double h, double tau,
                        const std::string& precond_name) {
  for (const auto& ev : report.eigenvalues)
    out << ev.real() << ',' << ev.imag() << ',' << h << ',' << tau << ',' << precond_name
        << '\n';
}

} // namespace fourmg
