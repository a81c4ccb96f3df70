#include "fourmg/krylov.hpp"

#include "fourmg/kernels.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fourmg {

std::pair<Vec, SolveReport> fgmres(const LinOp& apply_A, const LinOp& apply_P, const Vec& rhs,
                                   const Vec& x0, double tol, int maxit) {
  if (!(tol > 0.0)) throw std::invalid_argument("fgmres: tol must be positive");
  if (rhs.size() != x0.size()) throw std::invalid_argument("fgmres: dimension mismatch");
  const std::size_t n = rhs.size();
  if (maxit > static_cast<int>(n)) maxit = static_cast<int>(n);

  const auto t_start = std::chrono::steady_clock::now();
  SolveReport rep;
  Vec x = x0;

  Vec w(n);
  apply_A(x, w);
  for (std::size_t i = 0; i < n; ++i) w[i] = rhs[i] - w[i];
  const double beta = kernels::nrm2(n, w.data());
  rep.residuals.push_back(beta);
  if (beta == 0.0) {
    rep.converged = true;
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
            .count();
    return {x, rep};
  }

  std::vector<Vec> V;   // orthonormal Arnoldi basis
  std::vector<Vec> Z;   // preconditioned vectors, x = x0 + Z y
  std::vector<Vec> H;   // H[j] holds column j (j+2 entries)
  std::vector<double> cs, sn, g;
  V.reserve(maxit + 1);
  Z.reserve(maxit);
  kernels::scal(n, 1.0 / beta, w.data());
  V.push_back(w);
  g.push_back(beta);

  int k = 0;
  for (int j = 0; j < maxit; ++j) {
    Z.emplace_back(); // sized by the preconditioner action
    apply_P(V[j], Z[j]);
    apply_A(Z[j], w);

    std::vector<double> h(j + 2, 0.0);
    for (int i = 0; i <= j; ++i) {
      h[i] = kernels::dot(n, w.data(), V[i].data());
      kernels::axpy(n, -h[i], V[i].data(), w.data());
    }
    h[j + 1] = kernels::nrm2(n, w.data());
    const double hsub = h[j + 1]; // pre-rotation subdiagonal, 0 on breakdown

    for (int i = 0; i < j; ++i) {
      const double t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = t;
    }
    double c, s;
    const double rho = std::hypot(h[j], h[j + 1]);
    if (rho == 0.0) {
      c = 1.0;
      s = 0.0;
    } else {
      c = h[j] / rho;
      s = h[j + 1] / rho;
    }
    cs.push_back(c);
    sn.push_back(s);
    const double gj = g[j];
    g[j] = c * gj;
    g.push_back(-s * gj);
    h[j] = rho;
    h[j + 1] = 0.0;
    H.push_back(std::move(h));

    const double res = std::abs(g[j + 1]);
    rep.residuals.push_back(res);
    k = j + 1;
    if (res / beta < tol || hsub == 0.0) {
      // hsub == 0 is the happy breakdown: the Krylov space became
      // invariant and the least-squares solution is exact
      rep.converged = true;
      break;
    }
    if (j + 1 < maxit) {
      kernels::scal(n, 1.0 / hsub, w.data());
      V.push_back(w);
    }
  }

  // back substitution on the rotated upper-triangular system
  std::vector<double> y(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[i];
    for (int j2 = i + 1; j2 < k; ++j2) s -= H[j2][i] * y[j2];
    y[i] = s / H[i][i];
  }
  for (int j = 0; j < k; ++j) kernels::axpy(n, y[j], Z[j].data(), x.data());

  rep.iterations = k;
  if (k > 0) rep.conv_factor = std::pow(rep.residuals.back() / beta, 1.0 / k);
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
          .count();
  return {x, rep};
}

} // namespace fourmg
