#pragma once

#include <vector>

#include "dyson/couplings.hpp"
#include "dyson/interaction.hpp"

namespace dyson {

struct SquareMatrix {
  int n = 0;
  std::vector<double> a;

  explicit SquareMatrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

// Ferromagnetic coupling matrix on a window: A(i,j) = -J(|i-j|) for active
// pairs, zero diagonal.
SquareMatrix coupling_matrix(const SiteInterval& volume, const InteractionMask& mask,
                             const CouplingFamily& J);

// (A + kappa I) / (2 kappa), the normalization that brings the spectrum of a
// matrix with row sums below kappa into (0, 1).
SquareMatrix rescale_bd(const SquareMatrix& a, double kappa);

// All eigenvalues of a symmetric matrix, ascending.  Cyclic Jacobi; fine for
// the small windows used here.
std::vector<double> symmetric_eigenvalues(SquareMatrix a);

struct MatrixConditionReport {
  bool offdiag_nonpositive = false;  // (C1), symmetry checked separately
  double min_eigenvalue = 0.0;
  double spectral_radius = 0.0;
  bool positive_definite = false;    // (C2)
  bool radius_at_most_one = false;   // (C3)
  bool all() const { return offdiag_nonpositive && positive_definite && radius_at_most_one; }
};

// Throws on asymmetric input.
MatrixConditionReport check_bd_conditions(const SquareMatrix& a, double sym_tol = 1e-12);

}  // namespace dyson
