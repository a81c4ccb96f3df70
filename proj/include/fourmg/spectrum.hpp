#pragma once

#include "fourmg/block.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace fourmg {

struct BoundCheck {
  std::string name;
  bool satisfied = false;
  double margin = 0.0; // distance to the bound, negative when violated
};

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  double rho = 0.0; // spectral radius (of E_d for the block-diagonal case)
  double C1 = 0.0;  // measured norm-equivalence constant
  std::vector<BoundCheck> checks;

  bool all_satisfied() const;
};

/// Sharp norm-equivalence constant: smallest eigenvalue of the pencil
/// (M, Mbar).
double estimate_C1(const SparseMatrix& M, const DiagonalMatrix& Mbar);

/// Densifies P^-1 A via LU solves against the columns of the block operator
/// and returns its full spectrum. For the block-diagonal preconditioner the
/// system is taken in (u,v) ordering, i.e. the spectrum of Bd^-1 (A Pi)
/// with Pi the component swap. Adds containment checks: preconditioner A
/// gives the identity, B the spectral-radius bound, Btilde (when the two
/// stiffness matrices coincide) the interval (C1, 1] plus the multiplicity
/// of eigenvalue 1.
SpectrumReport preconditioned_spectrum(const DiscreteProblem& problem, BlockVariant precond,
                                       int cap = kDenseEigCap);

/// Spectrum of X = (I + tau^2 Mbar^-1 B M^-1 A)^-1 (Mbar^-1 M - I) computed
/// through the symmetric pencil (M - Mbar, Mbar + tau^2 A M^-1 A); requires
/// identical stiffness matrices A = B. Checks containment in (C1-1, 0].
SpectrumReport spectrum_of_X(const DiscreteProblem& problem, int cap = kDenseEigCap);

/// rho(E_d) for E_d = diag(M,M)^-1 [[0, tau A], [-tau B, 0]] plus the check
/// that the eigenvalues of I + E_d lie in the closed disk of radius rho(E_d)
/// around 1.
SpectrumReport verify_bd_bound(const DiscreteProblem& problem, int cap = kDenseEigCap);

/// Checks V^T (A + U V^T)^-1 U = (I + (V^T A^-1 U)^-1)^-1 on one random
/// well-conditioned instance; regenerates a bounded number of times when a
/// factorization fails. max_dev receives the relative deviation.
bool smw_identity_holds(int n, int k, std::uint64_t seed, double tol, double* max_dev = nullptr);

/// Eigenvector identity behind the spectral-radius bound of the all-lumped
/// preconditioner: |lambda-1|^2 = 4 Im(dM v,u)^2 / (alpha^2 + 4 Im(Mbar v,u)^2)
/// reconstructed from every well-conditioned eigenpair of B^-1 A.
BoundCheck lambda_deviation_identity(const DiscreteProblem& problem, double rel_tol = 1e-6,
                                     int cap = kDenseEigCap);

void write_spectrum_csv_header(std::ostream& out);
void write_spectrum_csv(std::ostream& out, const SpectrumReport& report, double h, double tau,
                        const std::string& precond_name);

} // namespace fourmg
